#include "lanedet/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lanedet {

std::vector<NodeId> SimTrace::active_nodes(int t) const {
  const TraceFrame& f = frames.at(t);
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < node_count; ++i) {
    if (f.active[i]) ids.push_back(i);
  }
  return ids;
}

std::string group_label(int group) {
  if (group == kRandomGroup) return "R";
  if (group < 0) throw std::invalid_argument("group_label: invalid group");
  return "L" + std::to_string(group);
}

int parse_group_label(const std::string& label) {
  if (label == "R") return kRandomGroup;
  if (label.size() >= 2 && label[0] == 'L') {
    int value = 0;
    const auto* begin = label.data() + 1;
    const auto* end = label.data() + label.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec == std::errc() && res.ptr == end && value >= 0) return value;
  }
  throw std::invalid_argument("parse_group_label: bad label '" + label + "'");
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& line) {
  throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) + ": '" +
                           line + "'");
}

// Splits on commas; returns false when the field count differs.
bool split_fields(const std::string& line, std::vector<std::string>& fields,
                  std::size_t expected) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields.size() == expected;
}

long parse_long(const std::string& field, std::size_t line_no, const std::string& line) {
  long value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    parse_fail(line_no, line);
  }
  return value;
}

double parse_double(const std::string& field, std::size_t line_no, const std::string& line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(field, &used);
    if (used != field.size()) parse_fail(line_no, line);
    return value;
  } catch (const std::logic_error&) {
    parse_fail(line_no, line);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

// Strips a trailing '\r' so CRLF files parse too.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "t,node_id,x,y,label\n";
  for (std::size_t t = 0; t < trace.frames.size(); ++t) {
    const TraceFrame& f = trace.frames[t];
    for (NodeId i = 0; i < trace.node_count; ++i) {
      if (!f.active[i]) continue;
      out << t << ',' << i << ',' << f.pos[i].x() << ',' << f.pos[i].y() << ','
          << group_label(trace.group[i]) << '\n';
    }
  }
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  auto out = open_out(path);
  write_trace_csv(trace, out);
}

SimTrace read_trace_csv(std::istream& in) {
  SimTrace trace;
  std::string line;
  if (!next_line(in, line) || line != "t,node_id,x,y,label") {
    throw std::runtime_error("trace CSV: missing 't,node_id,x,y,label' header");
  }
  std::vector<std::string> fields;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!split_fields(line, fields, 5)) parse_fail(line_no, line);
    const long t = parse_long(fields[0], line_no, line);
    const long id = parse_long(fields[1], line_no, line);
    const long x = parse_long(fields[2], line_no, line);
    const long y = parse_long(fields[3], line_no, line);
    const int group = parse_group_label(fields[4]);
    if (t < 0 || id < 0) parse_fail(line_no, line);
    if (id >= trace.node_count) {
      trace.node_count = static_cast<int>(id) + 1;
      trace.group.resize(trace.node_count, kRandomGroup);
      for (auto& frame : trace.frames) {
        frame.active.resize(trace.node_count, 0);
        frame.pos.resize(trace.node_count, GridPoint::Zero());
      }
    }
    if (t >= static_cast<long>(trace.frames.size())) {
      trace.frames.resize(t + 1);
      for (auto& frame : trace.frames) {
        frame.active.resize(trace.node_count, 0);
        frame.pos.resize(trace.node_count, GridPoint::Zero());
      }
    }
    TraceFrame& frame = trace.frames[t];
    frame.active[id] = 1;
    frame.pos[id] = GridPoint(static_cast<int>(x), static_cast<int>(y));
    trace.group[id] = group;
  }
  return trace;
}

SimTrace read_trace_csv(const std::string& path) {
  auto in = open_in(path);
  return read_trace_csv(in);
}

void write_planar_csv(const PlanarTrace& trace, std::ostream& out) {
  char buf[64];
  out << "t,node_id,x,y\n";
  for (std::size_t t = 0; t < trace.frames.size(); ++t) {
    const PlanarFrame& f = trace.frames[t];
    for (NodeId i = 0; i < trace.node_count; ++i) {
      if (!f.active[i]) continue;
      // %.17g keeps doubles exact across a write/read round trip
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", f.pos[i].x(), f.pos[i].y());
      out << t << ',' << i << ',' << buf << '\n';
    }
  }
}

void write_planar_csv(const PlanarTrace& trace, const std::string& path) {
  auto out = open_out(path);
  write_planar_csv(trace, out);
}

PlanarTrace read_planar_csv(std::istream& in) {
  PlanarTrace trace;
  std::string line;
  if (!next_line(in, line) || line != "t,node_id,x,y") {
    throw std::runtime_error("planar CSV: missing 't,node_id,x,y' header");
  }
  std::vector<std::string> fields;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!split_fields(line, fields, 4)) parse_fail(line_no, line);
    const long t = parse_long(fields[0], line_no, line);
    const long id = parse_long(fields[1], line_no, line);
    const double x = parse_double(fields[2], line_no, line);
    const double y = parse_double(fields[3], line_no, line);
    if (t < 0 || id < 0) parse_fail(line_no, line);
    if (id >= trace.node_count) {
      trace.node_count = static_cast<int>(id) + 1;
      for (auto& frame : trace.frames) {
        frame.active.resize(trace.node_count, 0);
        frame.pos.resize(trace.node_count, Vec2::Zero());
      }
    }
    if (t >= static_cast<long>(trace.frames.size())) {
      trace.frames.resize(t + 1);
      for (auto& frame : trace.frames) {
        frame.active.resize(trace.node_count, 0);
        frame.pos.resize(trace.node_count, Vec2::Zero());
      }
    }
    trace.frames[t].active[id] = 1;
    trace.frames[t].pos[id] = Vec2(x, y);
  }
  return trace;
}

PlanarTrace read_planar_csv(const std::string& path) {
  auto in = open_in(path);
  return read_planar_csv(in);
}

}  // namespace lanedet
