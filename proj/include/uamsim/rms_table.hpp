#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uamsim/simkernel.hpp"

namespace uamsim::io {

/// Tracking-RMS comparison table: positions in meters, attitude and arm
/// angles in degrees (converted at output only; traces store radians).
/// When a baseline row is present, a percent-reduction row
/// 100*(baseline - other)/baseline per column is appended.
struct RmsTable {
  struct Row {
    std::string label;
    Vec8 rms = Vec8::Zero();  // x y z (m), phi theta psi alpha1 alpha2 (deg)
  };

  std::vector<Row> rows;
  std::optional<Row> baseline;
  std::optional<Row> reduction;  // filled when baseline and one row exist

  static RmsTable build(const std::vector<sim::RunTrace>& traces,
                        const std::vector<std::string>& labels,
                        const sim::RunTrace* baseline_trace);

  std::string format() const;
  std::string to_csv() const;
};

Vec8 rms_row_from_trace(const sim::RunTrace& trace);

}  // namespace uamsim::io
