#include "uamsim/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace uamsim::io {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

const char* kHeaderCols =
    "t,x,y,z,phi,theta,psi,alpha1,alpha2,"
    "xd,yd,zd,phid,thetad,psid,alpha1d,alpha2d,"
    "e_x,e_y,e_z,e_phi,e_theta,e_psi,e_alpha1,e_alpha2,"
    "s_x,s_y,s_z,s_phi,s_theta,s_psi,s_alpha1,s_alpha2,"
    "tau_x,tau_y,tau_z,tau_phi,tau_theta,tau_psi,tau_alpha1,tau_alpha2,"
    "khat0,khat1,khat2,u1,V,gripper_state,event";

sim::TraceEvent event_from_string(const std::string& s) {
  if (s == "contact") return sim::TraceEvent::Contact;
  if (s == "pickup") return sim::TraceEvent::Pickup;
  if (s == "holding") return sim::TraceEvent::Holding;
  if (s == "drop") return sim::TraceEvent::Drop;
  return sim::TraceEvent::None;
}

}  // namespace

std::string trace_to_csv(const sim::RunTrace& trace, int decimate) {
  if (decimate < 1) decimate = 1;
  std::string out;
  out.reserve(trace.rows.size() / decimate * 512 + 1024);

  out += "# uamsim-trace v";
  out += std::to_string(sim::RunTrace::kSchemaVersion);
  out += " scenario=" + trace.scenario;
  out += " controller=" + trace.controller;
  out += " dt=";
  append_num(out, trace.dt);
  if (trace.diverged) out += " diverged=1";
  out += "\n";
  out += kHeaderCols;
  out += "\n";

  const size_t n = trace.rows.size();
  for (size_t i = 0; i < n; i += decimate) {
    const sim::TraceRow& r = trace.rows[i];
    append_num(out, r.t);
    for (int k = 0; k < kDof; ++k) { out += ','; append_num(out, r.chi(k)); }
    for (int k = 0; k < kDof; ++k) { out += ','; append_num(out, r.chi_d(k)); }
    for (int k = 0; k < kDof; ++k) { out += ','; append_num(out, r.e(k)); }
    for (int k = 0; k < kDof; ++k) { out += ','; append_num(out, r.s(k)); }
    for (int k = 0; k < kDof; ++k) { out += ','; append_num(out, r.tau(k)); }
    for (int k = 0; k < 3; ++k) { out += ','; append_num(out, r.k_hat(k)); }
    out += ','; append_num(out, r.u1);
    out += ','; append_num(out, r.lyapunov);
    out += ',';
    out += std::to_string(r.gripper);
    out += ',';
    out += sim::to_string(r.event);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const sim::RunTrace& trace, const std::string& path,
                     int decimate) {
  std::ofstream f(path, std::ios::out | std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_trace_csv: cannot open " + path);
  const std::string csv = trace_to_csv(trace, decimate);
  f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!f) throw std::runtime_error("write_trace_csv: write failed for " + path);
}

sim::RunTrace read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_trace_csv: cannot open " + path);

  std::string line;
  if (!std::getline(f, line)) throw SchemaError("read_trace_csv: empty file");
  const std::string magic =
      "# uamsim-trace v" + std::to_string(sim::RunTrace::kSchemaVersion);
  if (line.rfind(magic, 0) != 0) {
    throw SchemaError("read_trace_csv: unsupported schema in " + path);
  }

  sim::RunTrace trace;
  {
    std::istringstream meta(line.substr(magic.size()));
    std::string tok;
    while (meta >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "scenario") trace.scenario = val;
      else if (key == "controller") trace.controller = val;
      else if (key == "dt") trace.dt = std::stod(val);
      else if (key == "diverged") trace.diverged = val == "1";
    }
  }

  if (!std::getline(f, line) || line != kHeaderCols) {
    throw SchemaError("read_trace_csv: column header mismatch in " + path);
  }

  std::vector<std::string> cells;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    cells.clear();
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 48) {
      throw std::runtime_error("read_trace_csv: malformed row in " + path);
    }
    sim::TraceRow r;
    int c = 0;
    r.t = std::stod(cells[c++]);
    for (int k = 0; k < kDof; ++k) r.chi(k) = std::stod(cells[c++]);
    for (int k = 0; k < kDof; ++k) r.chi_d(k) = std::stod(cells[c++]);
    for (int k = 0; k < kDof; ++k) r.e(k) = std::stod(cells[c++]);
    for (int k = 0; k < kDof; ++k) r.s(k) = std::stod(cells[c++]);
    for (int k = 0; k < kDof; ++k) r.tau(k) = std::stod(cells[c++]);
    for (int k = 0; k < 3; ++k) r.k_hat(k) = std::stod(cells[c++]);
    r.u1 = std::stod(cells[c++]);
    r.lyapunov = std::stod(cells[c++]);
    r.gripper = std::stoi(cells[c++]);
    r.event = event_from_string(cells[c++]);
    trace.rows.push_back(r);
  }
  return trace;
}

}  // namespace uamsim::io
