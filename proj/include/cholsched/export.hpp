#pragma once

// Flat-file outputs: DOT and JSON for the DAG, CSV tables for profiles,
// bound curves, traces and speedup sweeps, and small static SVG figures.
// Everything is deterministic byte-for-byte: tasks in TaskId order, rows in
// key order, reals printed with 6 significant digits and a '.' decimal
// point regardless of locale.

#include <cstdint>
#include <iomanip>
#include <locale>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cholsched/alap_profile.hpp"
#include "cholsched/lower_bounds.hpp"
#include "cholsched/simulator.hpp"
#include "cholsched/task_graph.hpp"

namespace cholsched {

inline std::string format_real(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(6) << v;
  return os.str();
}

// Fill colors matching the published Gantt convention.
constexpr const char* kind_color(Kind kind) {
  switch (kind) {
  case Kind::Potrf:
    return "darkgreen";
  case Kind::Trsm:
    return "lightgreen";
  case Kind::Syrk:
    return "salmon";
  case Kind::Gemm:
    return "magenta";
  }
  return "gray";
}

inline void write_dot(const TaskGraph& g, std::ostream& os) {
  os << "digraph cholesky {\n";
  os << "  rankdir=TB;\n";
  for (std::size_t u = 0; u < g.size(); ++u) {
    const TaskId& task = g.tasks[u];
    os << "  \"" << to_string(task) << "\" [shape=" << (task.kind == Kind::Potrf ? "box" : "ellipse")
       << ",style=filled,fillcolor=" << kind_color(task.kind) << "];\n";
  }
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::int32_t v : g.successors[u])
      os << "  \"" << to_string(g.tasks[u]) << "\" -> \"" << to_string(g.tasks[v]) << "\";\n";
  os << "}\n";
}

inline void write_graph_json(const TaskGraph& g, std::ostream& os) {
  os << "{\n  \"t\": " << g.t << ",\n  \"tasks\": [\n";
  for (std::size_t u = 0; u < g.size(); ++u) {
    const TaskId& task = g.tasks[u];
    os << "    {\"name\": \"" << to_string(task) << "\", \"kind\": \"" << kind_name(task.kind)
       << "\", \"i\": " << task.i << ", \"j\": " << task.j << ", \"k\": " << task.k
       << ", \"weight\": " << task_weight(task) << "}" << (u + 1 < g.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"edges\": [\n";
  const std::int64_t edges = g.edge_count();
  std::int64_t written = 0;
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::int32_t v : g.successors[u]) {
      ++written;
      os << "    [" << u << ", " << v << "]" << (written < edges ? "," : "") << "\n";
    }
  os << "  ]\n}\n";
}

// Columns: K, m_c, m_t, m_s, m_g, total, lower, upper.
inline void write_profile_csv(int t, FormulaMode mode, std::ostream& os) {
  const HeightProfile prof = build_profile(t, mode);
  os << "K,m_c,m_t,m_s,m_g,total,lower,upper\n";
  for (std::int64_t K = 1; K <= prof.span(); ++K) {
    const auto b = height_bounds(t, K);
    const std::size_t x = static_cast<std::size_t>(K - 1);
    os << K << ',' << prof.m_c[x] << ',' << prof.m_t[x] << ',' << prof.m_s[x] << ','
       << prof.m_g[x] << ',' << prof.total[x] << ',' << format_real(b.lower) << ','
       << format_real(b.upper) << '\n';
  }
}

// Columns: p, bound_exact, argmax_k, bound_closed_form, cp, naive_tw_over_p.
inline void write_bounds_csv(int t, std::int64_t p_min, std::int64_t p_max, std::int64_t p_step,
                             std::ostream& os) {
  os << "p,bound_exact,argmax_k,bound_closed_form,cp,naive_tw_over_p\n";
  for (std::int64_t p = p_min; p <= p_max; p += p_step) {
    const BoundResult r = best_lower_bound(t, p);
    os << p << ',' << r.bound << ',' << r.argmax_k << ',' << format_real(closed_form_bound(t, p))
       << ',' << graph_critical_path(t) << ',' << ceil_div(total_work(t), p) << '\n';
  }
}

// Columns: kind,i,j,k,unit,start,end, sorted by (start, unit).
inline void write_trace_csv(const ScheduleTrace& trace, std::ostream& os) {
  std::vector<TraceEntry> rows = trace.entries;
  std::sort(rows.begin(), rows.end(), [](const TraceEntry& a, const TraceEntry& b) {
    return std::tie(a.start, a.unit, a.task) < std::tie(b.start, b.unit, b.task);
  });
  os << "kind,i,j,k,unit,start,end\n";
  for (const auto& e : rows)
    os << kind_name(e.task.kind) << ',' << e.task.i << ',' << e.task.j << ',' << e.task.k << ','
       << e.unit << ',' << e.start << ',' << e.end() << '\n';
}

inline void write_gantt_svg(const ScheduleTrace& trace, std::ostream& os) {
  const double px_per_tick = 8.0;
  const double lane_h = 12.0;
  const double margin = 30.0;
  const double width = margin * 2 + px_per_tick * static_cast<double>(trace.makespan);
  const double height = margin * 2 + lane_h * static_cast<double>(trace.p);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(width)
     << "\" height=\"" << format_real(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << format_real(width) << "\" height=\""
     << format_real(height) << "\" fill=\"white\"/>\n";
  std::vector<TraceEntry> rows = trace.entries;
  std::sort(rows.begin(), rows.end(), [](const TraceEntry& a, const TraceEntry& b) {
    return std::tie(a.start, a.unit, a.task) < std::tie(b.start, b.unit, b.task);
  });
  for (const auto& e : rows) {
    const double x = margin + px_per_tick * static_cast<double>(e.start);
    const double y = margin + lane_h * static_cast<double>(e.unit);
    const double w = px_per_tick * static_cast<double>(task_weight(e.task));
    os << "<rect x=\"" << format_real(x) << "\" y=\"" << format_real(y) << "\" width=\""
       << format_real(w) << "\" height=\"" << format_real(lane_h - 1) << "\" fill=\""
       << kind_color(e.task.kind) << "\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
  }
  os << "</svg>\n";
}

namespace detail {

inline void write_polyline(const std::vector<std::pair<double, double>>& pts, const char* color,
                           std::ostream& os) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t x = 0; x < pts.size(); ++x) {
    if (x) os << ' ';
    os << format_real(pts[x].first) << ',' << format_real(pts[x].second);
  }
  os << "\"/>\n";
}

struct ChartFrame {
  double width{800}, height{500}, margin{50};
  double x_max{1}, y_max{1};

  double px(double x) const { return margin + (width - 2 * margin) * x / x_max; }
  double py(double y) const { return height - margin - (height - 2 * margin) * y / y_max; }

  void open(std::ostream& os) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(width)
       << "\" height=\"" << format_real(height) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << format_real(width) << "\" height=\""
       << format_real(height) << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << format_real(margin) << "\" y1=\"" << format_real(height - margin)
       << "\" x2=\"" << format_real(width - margin) << "\" y2=\"" << format_real(height - margin)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << format_real(margin) << "\" y1=\"" << format_real(margin) << "\" x2=\""
       << format_real(margin) << "\" y2=\"" << format_real(height - margin)
       << "\" stroke=\"black\"/>\n";
  }
};

} // namespace detail

// Exact heights in black, lower bound in blue, upper bound in red.
inline void write_profile_svg(int t, FormulaMode mode, std::ostream& os) {
  const HeightProfile prof = build_profile(t, mode);
  detail::ChartFrame frame;
  frame.x_max = static_cast<double>(prof.span());
  for (std::int64_t K = 1; K <= prof.span(); ++K) {
    frame.y_max = std::max(frame.y_max, static_cast<double>(prof.total[K - 1]));
    frame.y_max = std::max(frame.y_max, height_bounds(t, K).upper);
  }
  frame.open(os);
  std::vector<std::pair<double, double>> exact, lower, upper;
  for (std::int64_t K = 1; K <= prof.span(); ++K) {
    const auto b = height_bounds(t, K);
    exact.push_back({frame.px(static_cast<double>(K)), frame.py(static_cast<double>(prof.total[K - 1]))});
    lower.push_back({frame.px(static_cast<double>(K)), frame.py(std::max(0.0, b.lower))});
    upper.push_back({frame.px(static_cast<double>(K)), frame.py(std::max(0.0, b.upper))});
  }
  detail::write_polyline(exact, "black", os);
  detail::write_polyline(lower, "blue", os);
  detail::write_polyline(upper, "red", os);
  os << "</svg>\n";
}

struct SpeedupRow {
  std::int64_t p{0};
  std::map<Policy, double> speedup; // keyed by policy, iteration order fixed
  double bound_speedup{0};          // t^3 / best_lower_bound
  double cp_speedup{0};             // t^3 / (9t-10)
};

inline std::vector<SpeedupRow> speedup_sweep(int t, std::int64_t p_min, std::int64_t p_max,
                                             std::int64_t p_step,
                                             const std::vector<Policy>& policies) {
  const TaskGraph g = build_graph(t);
  const double tw = static_cast<double>(total_work(t));
  std::vector<SpeedupRow> rows;
  for (std::int64_t p = p_min; p <= p_max; p += p_step) {
    SpeedupRow row;
    row.p = p;
    for (Policy policy : policies)
      row.speedup[policy] = tw / static_cast<double>(simulate(g, p, policy).makespan);
    row.bound_speedup = tw / static_cast<double>(best_lower_bound(t, p).bound);
    row.cp_speedup = tw / static_cast<double>(graph_critical_path(t));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_speedup_csv(const std::vector<SpeedupRow>& rows, std::ostream& os) {
  os << "p";
  if (!rows.empty())
    for (const auto& [policy, s] : rows.front().speedup) os << ",speedup_" << policy_name(policy);
  os << ",bound_speedup,cp_speedup\n";
  for (const auto& row : rows) {
    os << row.p;
    for (const auto& [policy, s] : row.speedup) os << ',' << format_real(s);
    os << ',' << format_real(row.bound_speedup) << ',' << format_real(row.cp_speedup) << '\n';
  }
}

inline void write_speedup_svg(const std::vector<SpeedupRow>& rows, std::ostream& os) {
  detail::ChartFrame frame;
  for (const auto& row : rows) {
    frame.x_max = std::max(frame.x_max, static_cast<double>(row.p));
    frame.y_max = std::max(frame.y_max, row.bound_speedup);
    frame.y_max = std::max(frame.y_max, row.cp_speedup);
  }
  frame.open(os);
  static constexpr const char* policy_colors[] = {"red", "purple", "orange", "steelblue"};
  std::vector<std::pair<double, double>> pts;
  auto draw = [&](auto value, const char* color) {
    pts.clear();
    for (const auto& row : rows)
      pts.push_back({frame.px(static_cast<double>(row.p)), frame.py(value(row))});
    detail::write_polyline(pts, color, os);
  };
  draw([](const SpeedupRow& r) { return r.cp_speedup; }, "black");
  draw([](const SpeedupRow& r) { return r.bound_speedup; }, "green");
  if (!rows.empty()) {
    int idx = 0;
    for (const auto& [policy, s] : rows.front().speedup) {
      Policy pol = policy;
      draw([pol](const SpeedupRow& r) { return r.speedup.at(pol); }, policy_colors[idx % 4]);
      ++idx;
    }
  }
  os << "</svg>\n";
}

} // namespace cholsched
