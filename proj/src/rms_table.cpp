#include "uamsim/rms_table.hpp"

#include <cstdio>
#include <sstream>

namespace uamsim::io {

Vec8 rms_row_from_trace(const sim::RunTrace& trace) {
  Vec8 r = sim::rms_error(trace);
  for (int i = 3; i < kDof; ++i) r(i) = rad2deg(r(i));
  return r;
}

RmsTable RmsTable::build(const std::vector<sim::RunTrace>& traces,
                         const std::vector<std::string>& labels,
                         const sim::RunTrace* baseline_trace) {
  if (traces.size() != labels.size()) {
    throw std::invalid_argument("RmsTable: one label per trace required");
  }
  RmsTable table;
  for (size_t i = 0; i < traces.size(); ++i) {
    table.rows.push_back({labels[i], rms_row_from_trace(traces[i])});
  }
  if (baseline_trace != nullptr) {
    table.baseline = Row{"baseline", rms_row_from_trace(*baseline_trace)};
    if (table.rows.size() == 1) {
      Row red;
      red.label = "% reduction";
      for (int c = 0; c < kDof; ++c) {
        const double base = table.baseline->rms(c);
        red.rms(c) = base != 0.0
                         ? 100.0 * (base - table.rows[0].rms(c)) / base
                         : 0.0;
      }
      table.reduction = red;
    }
  }
  return table;
}

namespace {

void format_row(std::ostringstream& out, const RmsTable::Row& row,
                size_t label_width) {
  char buf[32];
  out << row.label;
  for (size_t i = row.label.size(); i < label_width; ++i) out << ' ';
  for (int c = 0; c < kDof; ++c) {
    std::snprintf(buf, sizeof(buf), " %8.4f", row.rms(c));
    out << buf;
  }
  out << "\n";
}

}  // namespace

std::string RmsTable::format() const {
  size_t width = 14;
  if (baseline) width = std::max(width, baseline->label.size() + 2);
  for (const Row& r : rows) width = std::max(width, r.label.size() + 2);

  std::ostringstream out;
  const char* head[2] = {
      "      x        y        z      phi    theta      psi   alpha1   alpha2",
      "    (m)      (m)      (m)    (deg)    (deg)    (deg)    (deg)    (deg)"};
  for (const char* h : head) {
    for (size_t i = 0; i < width; ++i) out << ' ';
    out << h << "\n";
  }
  if (baseline) format_row(out, *baseline, width);
  for (const Row& r : rows) format_row(out, r, width);
  if (reduction) format_row(out, *reduction, width);
  return out.str();
}

std::string RmsTable::to_csv() const {
  std::ostringstream out;
  out << "label,x_m,y_m,z_m,phi_deg,theta_deg,psi_deg,alpha1_deg,alpha2_deg\n";
  auto emit = [&out](const Row& r) {
    out << r.label;
    char buf[32];
    for (int c = 0; c < kDof; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", r.rms(c));
      out << buf;
    }
    out << "\n";
  };
  if (baseline) emit(*baseline);
  for (const Row& r : rows) emit(r);
  if (reduction) emit(*reduction);
  return out.str();
}

}  // namespace uamsim::io
