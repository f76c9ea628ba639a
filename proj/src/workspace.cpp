#include "cws/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace cws {

std::uint64_t ReadOnlyArray::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (const Point& p : *data_) {
    mix(static_cast<std::uint64_t>(p.x));
    mix(static_cast<std::uint64_t>(p.y));
  }
  return h;
}

void OutputSink::edge(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  ++emitted_;
  if (out_ != nullptr) *out_ << "E " << i << ' ' << j << '\n';
  if (collect_) edges_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
}

void OutputSink::hull_edge(std::size_t from, std::size_t to) {
  ++emitted_;
  if (out_ != nullptr) *out_ << "H " << from << ' ' << to << '\n';
  if (collect_)
    hull_.emplace_back(static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to));
}

void OutputSink::vertex(std::array<std::uint32_t, 3> sites, const Circumcenter& c) {
  std::sort(sites.begin(), sites.end());
  ++emitted_;
  if (out_ != nullptr)
    *out_ << "V " << sites[0] << ' ' << sites[1] << ' ' << sites[2] << ' ' << c.x.str()
          << ' ' << c.y.str() << '\n';
  if (collect_) vertices_.push_back({sites, c});
}

void OutputSink::delaunay_edge(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  ++emitted_;
  if (out_ != nullptr) *out_ << "D " << i << ' ' << j << '\n';
  if (collect_) edges_.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
}

std::string AuditReport::csv_row() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << n << ',' << s << ',' << peak_words << ',' << input_reads << ',' << emits << ','
     << wall_ms;
  return os.str();
}

AuditReport make_report(const ReadOnlyArray& input, std::size_t s,
                        const WorkspaceBudget& budget, const OutputSink& sink,
                        const Stopwatch& clock) {
  return {input.size(), s, budget.peak(), input.reads(), sink.emitted(), clock.elapsed_ms()};
}

namespace {

bool parse_int(std::string_view tok, std::int64_t& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

std::vector<Point> parse_points(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw ParseError(lineno, "expected two integers");
    std::int64_t x = 0, y = 0;
    if (!parse_int(std::string_view(line).substr(0, sp), x) ||
        !parse_int(std::string_view(line).substr(sp + 1), y))
      throw ParseError(lineno, "malformed integer");
    Point p{x, y};
    if (!in_coord_range(p)) throw ParseError(lineno, "coordinate outside +-2^26");
    pts.push_back(p);
  }
  return pts;
}

void reject_duplicates(const std::vector<Point>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b] || (points[a] == points[b] && a < b);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points[order[k]] == points[order[k - 1]])
      throw Error(ErrorKind::degenerate_input,
                  "duplicate point at indices " + std::to_string(order[k - 1]) + " and " +
                      std::to_string(order[k]));
  }
}

}  // namespace cws
