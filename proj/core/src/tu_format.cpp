#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "netloc/dataset.hpp"

namespace netloc {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_error(const fs::path& file, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError,
              file.filename().string() + ":" + std::to_string(line) + ": " + what);
}

// Splits a line on commas and whitespace into unsigned integers.
bool parse_fields(const std::string& line, std::vector<std::uint64_t>& out) {
  out.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  while (true) {
    while (p < end && (*p == ',' || *p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) return true;
    std::uint64_t value = 0;
    const auto res = std::from_chars(p, end, value);
    if (res.ec != std::errc()) return false;
    p = res.ptr;
    if (p < end && *p != ',' && *p != ' ' && *p != '\t' && *p != '\r') return false;
    out.push_back(value);
  }
}

fs::path find_edge_file(const fs::path& dir, std::string& name) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::ParseError, "'" + dir.string() + "' is not a directory");
  }
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string file = entry.path().filename().string();
    if (file.size() > 6 && file.ends_with("_A.txt")) candidates.push_back(entry.path());
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::ParseError, "no <DS>_A.txt file in '" + dir.string() + "'");
  }
  if (candidates.size() > 1) {
    throw Error(ErrorKind::ParseError, "several <DS>_A.txt files in '" + dir.string() + "'");
  }
  const std::string file = candidates.front().filename().string();
  name = file.substr(0, file.size() - 6);
  return candidates.front();
}

}  // namespace

std::vector<RawGraph> ingest_tu_dataset(const std::string& dir) {
  std::string name;
  const fs::path edge_path = find_edge_file(dir, name);
  const fs::path indicator_path = fs::path(dir) / (name + "_graph_indicator.txt");

  std::ifstream indicator(indicator_path);
  if (!indicator) {
    throw Error(ErrorKind::ParseError, "missing file '" + indicator_path.string() + "'");
  }
  // node_graph[v] is the graph id of global node v (0-indexed node).
  std::vector<std::uint64_t> node_graph;
  std::vector<std::uint64_t> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(indicator, line)) {
    ++line_no;
    if (!parse_fields(line, fields)) parse_error(indicator_path, line_no, "not an integer");
    if (fields.empty()) continue;
    if (fields.size() != 1) parse_error(indicator_path, line_no, "expected one graph id");
    node_graph.push_back(fields[0]);
  }

  std::map<std::uint64_t, std::vector<std::size_t>> members;
  for (std::size_t v = 0; v < node_graph.size(); ++v) members[node_graph[v]].push_back(v);
  std::vector<NodeId> local(node_graph.size());
  for (const auto& [gid, nodes] : members) {
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<NodeId>(i);
  }

  std::map<std::uint64_t, std::vector<Edge>> edges;
  std::ifstream edge_in(edge_path);
  if (!edge_in) throw Error(ErrorKind::ParseError, "cannot open '" + edge_path.string() + "'");
  line_no = 0;
  while (std::getline(edge_in, line)) {
    ++line_no;
    if (!parse_fields(line, fields)) parse_error(edge_path, line_no, "not an integer");
    if (fields.empty()) continue;
    if (fields.size() != 2) parse_error(edge_path, line_no, "expected two node ids");
    const auto a = fields[0];
    const auto b = fields[1];
    if (a < 1 || b < 1 || a > node_graph.size() || b > node_graph.size()) {
      parse_error(edge_path, line_no, "node id outside the graph indicator range");
    }
    if (node_graph[a - 1] != node_graph[b - 1]) {
      parse_error(edge_path, line_no, "edge joins nodes of different graphs");
    }
    if (a == b) continue;
    NodeId u = local[a - 1];
    NodeId v = local[b - 1];
    if (u > v) std::swap(u, v);
    edges[node_graph[a - 1]].push_back({u, v});
  }

  std::vector<RawGraph> out;
  out.reserve(members.size());
  for (const auto& [gid, nodes] : members) {
    auto& list = edges[gid];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    out.push_back({name + "-" + std::to_string(gid), Graph(nodes.size(), std::move(list)), name});
  }
  return out;
}

}  // namespace netloc
