#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "netloc/error.hpp"
#include "netloc/graph.hpp"

namespace netloc {

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

namespace {

[[noreturn]] void parse_failure(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "edge list line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) parse_failure(line_no + 1, "missing header \"n m\"");
  std::istringstream header(line);
  long long n = 0, m = 0;
  if (!(header >> n >> m) || n < 1 || m < 0) parse_failure(line_no, "bad header \"" + line + "\"");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_line()) parse_failure(line_no + 1, "expected " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long i = -1, j = -1;
    std::string extra;
    if (!(row >> i >> j) || (row >> extra)) parse_failure(line_no, "expected \"i j\"");
    if (i < 0 || j < 0 || i >= n || j >= n) parse_failure(line_no, "endpoint out of range");
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
  }
  if (next_line()) parse_failure(line_no, "trailing content after " + std::to_string(m) + " edges");
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write edge list '" + path + "'");
  write_edge_list(out, g);
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace netloc
