#pragma once

#include <iosfwd>
#include <string>

#include "uamsim/simkernel.hpp"

namespace uamsim::io {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Trace CSV layout (stable, versioned by the first line):
//   # uamsim-trace v1 scenario=<name> controller=<name> dt=<dt>
//   t,x,y,z,phi,theta,psi,alpha1,alpha2,xd,...,e_*,s_*,tau_*,khat0..2,u1,V,
//   gripper_state,event
// Angles are radians. Values are printed with "%.17g" so identical runs
// produce identical bytes and read-back is exact. No timestamps.

std::string trace_to_csv(const sim::RunTrace& trace, int decimate = 1);

void write_trace_csv(const sim::RunTrace& trace, const std::string& path,
                     int decimate = 1);

/// Parses a trace CSV back into memory. Throws SchemaError on a version or
/// header mismatch, std::runtime_error on malformed rows.
sim::RunTrace read_trace_csv(const std::string& path);

}  // namespace uamsim::io
