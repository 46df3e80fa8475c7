#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "json.hpp"
#include "netloc/error.hpp"
#include "netloc/train.hpp"

namespace netloc {

namespace fs = std::filesystem;
using detail::format_double;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create directory '" + dir + "': " + ec.message());
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
}

int region_index(RegionLabel label) { return static_cast<int>(label); }

}  // namespace

void write_report(const EvalReport& report, const std::string& dir) {
  ensure_dir(dir);

  std::ostringstream pred;
  pred << "id,n,family,y,yhat,true_region,pred_region\n";
  for (const auto& row : report.rows) {
    pred << row.id << ',' << row.n << ',' << row.family << ',' << format_double(row.target) << ','
         << format_double(row.prediction) << ',' << region_index(row.true_region) << ','
         << region_index(row.predicted_region) << '\n';
  }
  write_file(fs::path(dir) / "predictions.csv", pred.str());

  std::ostringstream conf;
  conf << "true_region,pred_r1,pred_r2,pred_r3,count\n";
  for (std::size_t t = 0; t < 3; ++t) {
    const std::size_t total = report.counts[t][0] + report.counts[t][1] + report.counts[t][2];
    conf << 'r' << t + 1;
    for (std::size_t p = 0; p < 3; ++p) conf << ',' << format_double(report.percent[t][p]);
    conf << ',' << total << '\n';
  }
  write_file(fs::path(dir) / "confusion.csv", conf.str());

  nlohmann::ordered_json summary;
  summary["count"] = report.rows.size();
  summary["mse"] = report.mse;
  summary["region_accuracy"] = report.accuracy;
  summary["pearson"] = report.pearson;
  summary["confusion_counts"] = report.counts;
  summary["confusion_percent"] = report.percent;
  write_file(fs::path(dir) / "summary.json", summary.dump(2) + "\n");
}

void write_histograms(const std::vector<WeightSnapshot>& snapshots, std::size_t bins,
                      const std::string& dir) {
  if (bins == 0) throw Error(ErrorKind::InvalidParams, "histogram bins must be >= 1");
  ensure_dir(dir);
  for (const auto& snap : snapshots) {
    std::ostringstream out;
    out << "tensor,bin,lo,hi,count\n";
    for (const auto& tensor : snap.tensors) {
      if (tensor.values.empty()) continue;
      const auto [lo_it, hi_it] = std::minmax_element(tensor.values.begin(), tensor.values.end());
      const double lo = *lo_it;
      const double hi = *hi_it;
      std::vector<std::size_t> counts(bins, 0);
      const double width = (hi - lo) / static_cast<double>(bins);
      for (double v : tensor.values) {
        std::size_t b = 0;
        if (width > 0.0) {
          b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
        }
        ++counts[b];
      }
      for (std::size_t b = 0; b < bins; ++b) {
        const double b_lo = lo + width * static_cast<double>(b);
        const double b_hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
        out << tensor.name << ',' << b << ',' << format_double(b_lo) << ',' << format_double(b_hi)
            << ',' << counts[b] << '\n';
      }
    }
    write_file(fs::path(dir) / ("weights_epoch_" + std::to_string(snap.epoch) + ".csv"), out.str());
  }
}

void write_loss_curve(std::span<const double> loss_curve, const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) ensure_dir(p.parent_path().string());
  std::ostringstream out;
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < loss_curve.size(); ++e) {
    out << e + 1 << ',' << format_double(loss_curve[e]) << '\n';
  }
  write_file(p, out.str());
}

}  // namespace netloc
