#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctan/ctdg/event.hpp"
#include "ctan/num/serialize.hpp"

namespace ctan::ctdg {

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

inline double parse_f64(std::string_view s, std::size_t line_no,
                        const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " value '" + std::string(s) + "'");
  return v;
}

inline std::int64_t parse_i64(std::string_view s, std::size_t line_no,
                              const char* what) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " value '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// Reads the event CSV contract:
///   t,src,dst,kind,edge_feat_0..e_{de-1},src_feat_0..,dst_feat_0..
/// kind is "node" or "edge"; node rows leave dst empty. Decreasing
/// timestamps are an error unless sort_by_time is set, in which case a
/// stable sort by time is applied before interning.
inline EventStream read_event_csv(const std::string& path,
                                  bool sort_by_time = false) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open event file: " + path);
  std::string line;
  if (!std::getline(f, line)) {
    EventStream empty;
    return empty;  // empty file -> empty stream
  }
  auto header = detail::split_csv_line(line);
  if (header.size() < 4 || header[0] != "t" || header[1] != "src" ||
      header[2] != "dst" || header[3] != "kind")
    throw ParseError("line 1: bad header, expected t,src,dst,kind,...");
  std::int64_t d_e = 0, d_n = 0;
  std::size_t col = 4;
  while (col < header.size() &&
         header[col].substr(0, 10) == "edge_feat_") {
    ++d_e;
    ++col;
  }
  while (col < header.size() && header[col].substr(0, 9) == "src_feat_") {
    ++d_n;
    ++col;
  }
  std::int64_t dst_cols = 0;
  while (col < header.size() && header[col].substr(0, 9) == "dst_feat_") {
    ++dst_cols;
    ++col;
  }
  if (col != header.size() || dst_cols != d_n)
    throw ParseError("line 1: malformed feature columns in header");

  struct Row {
    double time;
    EventKind kind;
    std::int64_t src, dst;
    std::vector<double> sf, df, ef;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  double prev_time = -1.0;
  bool needs_sort = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    Row r;
    r.time = detail::parse_f64(cells[0], line_no, "time");
    if (r.time < 0.0)
      throw ParseError("line " + std::to_string(line_no) + ": negative time");
    std::string_view kind = cells[3];
    if (kind == "edge") {
      r.kind = EventKind::EdgeAdd;
    } else if (kind == "node") {
      r.kind = EventKind::NodeCreate;
    } else if (kind == "edge_del" || kind == "node_del") {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unsupported deletion event kind '" +
                       std::string(kind) + "'");
    } else {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unknown event kind '" + std::string(kind) + "'");
    }
    r.src = detail::parse_i64(cells[1], line_no, "src");
    if (r.kind == EventKind::EdgeAdd) {
      r.dst = detail::parse_i64(cells[2], line_no, "dst");
    } else {
      if (!cells[2].empty())
        throw ParseError("line " + std::to_string(line_no) +
                         ": node row must leave dst empty");
      r.dst = -1;
    }
    std::size_t c = 4;
    for (std::int64_t i = 0; i < d_e; ++i)
      r.ef.push_back(r.kind == EventKind::EdgeAdd
                         ? detail::parse_f64(cells[c + static_cast<std::size_t>(i)],
                                             line_no, "edge_feat")
                         : 0.0);
    c += static_cast<std::size_t>(d_e);
    for (std::int64_t i = 0; i < d_n; ++i)
      r.sf.push_back(detail::parse_f64(cells[c + static_cast<std::size_t>(i)],
                                       line_no, "src_feat"));
    c += static_cast<std::size_t>(d_n);
    for (std::int64_t i = 0; i < d_n; ++i)
      r.df.push_back(r.kind == EventKind::EdgeAdd
                         ? detail::parse_f64(cells[c + static_cast<std::size_t>(i)],
                                             line_no, "dst_feat")
                         : 0.0);
    if (r.kind == EventKind::NodeCreate) r.ef.clear();
    if (r.time < prev_time) {
      if (!sort_by_time)
        throw ParseError("line " + std::to_string(line_no) +
                         ": decreasing timestamp (pass the sort flag to "
                         "reorder)");
      needs_sort = true;
    }
    prev_time = std::max(prev_time, r.time);
    rows.push_back(std::move(r));
  }
  if (needs_sort)
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.time < b.time; });

  EventStream s;
  s.node_feat_dim = d_n;
  s.edge_feat_dim = d_e;
  s.events.reserve(rows.size());
  for (Row& r : rows) {
    Event e;
    e.time = r.time;
    e.kind = r.kind;
    e.src = s.intern(r.src);
    e.dst = r.kind == EventKind::EdgeAdd ? s.intern(r.dst) : kNoNode;
    e.src_features = std::move(r.sf);
    e.dst_features = std::move(r.df);
    e.edge_features = std::move(r.ef);
    if (e.kind == EventKind::NodeCreate) {
      e.dst_features.assign(static_cast<std::size_t>(d_n), 0.0);
    }
    s.events.push_back(std::move(e));
  }
  s.validate();
  return s;
}

/// Writes the stream back in the same contract; paired with read_event_csv
/// this round-trips the event list exactly.
inline void write_event_csv(const std::string& path, const EventStream& s) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  f << "t,src,dst,kind";
  for (std::int64_t i = 0; i < s.edge_feat_dim; ++i) f << ",edge_feat_" << i;
  for (std::int64_t i = 0; i < s.node_feat_dim; ++i) f << ",src_feat_" << i;
  for (std::int64_t i = 0; i < s.node_feat_dim; ++i) f << ",dst_feat_" << i;
  f << "\n";
  for (const Event& e : s.events) {
    f << num::f64_to_string(e.time) << "," << s.external_id(e.src) << ",";
    if (e.kind == EventKind::EdgeAdd) f << s.external_id(e.dst);
    f << "," << (e.kind == EventKind::EdgeAdd ? "edge" : "node");
    for (std::int64_t i = 0; i < s.edge_feat_dim; ++i)
      f << ","
        << num::f64_to_string(e.kind == EventKind::EdgeAdd
                                  ? e.edge_features[static_cast<std::size_t>(i)]
                                  : 0.0);
    for (std::int64_t i = 0; i < s.node_feat_dim; ++i)
      f << "," << num::f64_to_string(e.src_features[static_cast<std::size_t>(i)]);
    for (std::int64_t i = 0; i < s.node_feat_dim; ++i)
      f << ","
        << num::f64_to_string(e.kind == EventKind::EdgeAdd
                                  ? e.dst_features[static_cast<std::size_t>(i)]
                                  : 0.0);
    f << "\n";
  }
  if (!f) throw Error("write failed: " + path);
}

/// Loads the public JODIE interaction layout
/// (user_id,item_id,timestamp,state_label,f0..f171). Items are mapped to
/// node ids offset by the user count; interactions carry no node features.
inline EventStream read_jodie_csv(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw Error("cannot open event file: " + path);
  std::string line;
  std::getline(probe, line);  // header
  std::int64_t max_user = -1;
  std::size_t line_no = 1;
  while (std::getline(probe, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": no fields");
    max_user = std::max(
        max_user, detail::parse_i64(std::string_view(line).substr(0, comma),
                                    line_no, "user_id"));
  }
  const std::int64_t user_count = max_user + 1;

  std::ifstream f(path);
  std::getline(f, line);  // header
  EventStream s;
  s.node_feat_dim = 0;
  s.edge_feat_dim = -1;
  line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() < 4)
      throw ParseError("line " + std::to_string(line_no) + ": too few fields");
    Event e;
    const std::int64_t user = detail::parse_i64(cells[0], line_no, "user_id");
    const std::int64_t item = detail::parse_i64(cells[1], line_no, "item_id");
    e.time = detail::parse_f64(cells[2], line_no, "timestamp");
    e.kind = EventKind::EdgeAdd;
    e.src = s.intern(user);
    e.dst = s.intern(user_count + item);
    const std::int64_t d_e = static_cast<std::int64_t>(cells.size()) - 4;
    if (s.edge_feat_dim < 0) s.edge_feat_dim = d_e;
    if (d_e != s.edge_feat_dim)
      throw ParseError("line " + std::to_string(line_no) +
                       ": inconsistent feature count");
    e.edge_features.reserve(static_cast<std::size_t>(d_e));
    for (std::int64_t i = 0; i < d_e; ++i)
      e.edge_features.push_back(detail::parse_f64(
          cells[static_cast<std::size_t>(4 + i)], line_no, "feature"));
    s.events.push_back(std::move(e));
  }
  if (s.edge_feat_dim < 0) s.edge_feat_dim = 0;
  s.validate();
  return s;
}

}  // namespace ctan::ctdg
