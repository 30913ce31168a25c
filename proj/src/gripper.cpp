#include "uamsim/gripper.hpp"

#include <algorithm>
#include <cmath>

namespace uamsim::grip {

MonotoneCurve::MonotoneCurve(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size()) {
    throw std::invalid_argument("MonotoneCurve: need >= 2 paired knots");
  }
  bool nondec = true, noninc = true;
  for (size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) {
      throw std::invalid_argument("MonotoneCurve: x not strictly increasing");
    }
    nondec = nondec && ys_[i] >= ys_[i - 1];
    noninc = noninc && ys_[i] <= ys_[i - 1];
  }
  if (!nondec && !noninc) {
    throw std::invalid_argument("MonotoneCurve: y not monotone");
  }
}

double MonotoneCurve::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const size_t i = static_cast<size_t>(it - xs_.begin());
  const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
}

void GripperModel::validate() const {
  const bool ok = support_distance_mm >= 65.0 && support_distance_mm <= 140.0 &&
                  pretension_n >= 0.0 && spring_k_n_per_mm > 0.0 &&
                  base_trigger_force_140_n > 0.0 && grasp_window_mm > 0.0;
  if (!ok) throw std::invalid_argument("GripperModel: parameter out of range");
  if (std::abs(offset_curve(0.0) - 1.0) > 1e-9) {
    throw std::invalid_argument("GripperModel: offset multiplier must be 1 at center");
  }
  // curl completes within the longest measured activation (0.17 +/- 0.005 s)
  const double act_max = std::max(activation_curve(activation_curve.x_min()),
                                  activation_curve(activation_curve.x_max()));
  if (act_max > 0.175) {
    throw std::invalid_argument("GripperModel: activation time beyond 0.175 s");
  }
}

TriggerForceFit trigger_force_fit(double x, const GripperModel& model) {
  if (!(x >= 65.0 && x <= 140.0)) {
    throw UncharacterizedInputError(
        "trigger_force_fit: support distance outside the characterized 65-140 mm");
  }
  TriggerForceFit out;
  out.force = model.poly_a * x * x + model.poly_b * x + model.poly_c;
  out.vertex_mm = -model.poly_b / (2.0 * model.poly_a);
  return out;
}

double spring_pretension(double delta_x_mm, double k_n_per_mm) {
  if (delta_x_mm < 0.0) {
    throw std::invalid_argument("spring_pretension: displacement must be >= 0");
  }
  return k_n_per_mm * delta_x_mm;
}

double effective_trigger_force(const GripperModel& model, double offset_mm) {
  const double off = std::abs(offset_mm);
  if (off > model.offset_curve.x_max()) {
    throw UncharacterizedInputError(
        "effective_trigger_force: offset beyond the characterized 60 mm");
  }
  const double centered = model.pretension_curve(model.pretension_n);
  // Support distances other than 140 mm carry no pretension data; scale the
  // whole curve by the relative bench fit instead.
  const double fit_ref = trigger_force_fit(140.0, model).force;
  const double fit_here = trigger_force_fit(model.support_distance_mm, model).force;
  return centered * (fit_here / fit_ref) * model.offset_curve(off);
}

double activation_time(double offset_mm, const GripperModel& model) {
  return model.activation_curve(std::abs(offset_mm));
}

GripperState gripper_update(const GripperState& gstate, const GripperModel& model,
                            double contact_normal_force_n, double contact_offset_mm,
                            double dt) {
  GripperState next = gstate;
  switch (gstate.band_state) {
    case BandState::Flat: {
      const double off = std::abs(contact_offset_mm);
      if (off > model.grasp_window_mm) break;  // outside the usable span
      if (contact_normal_force_n >= effective_trigger_force(model, contact_offset_mm)) {
        next.band_state = BandState::Curled;
        next.activation_timer_s = activation_time(contact_offset_mm, model);
        next.contact_offset_mm = contact_offset_mm;
      }
      break;
    }
    case BandState::Curled: {
      if (next.holding || next.activation_timer_s <= 0.0) break;
      next.activation_timer_s = std::max(0.0, next.activation_timer_s - dt);
      if (next.activation_timer_s == 0.0) {
        // Curl complete; the grasp holds only if the object is still there.
        next.holding = contact_normal_force_n > 0.0;
      }
      break;
    }
  }
  return next;
}

GripperState open_gripper(const GripperState& gstate) {
  if (gstate.band_state == BandState::Flat) {
    throw GripperStateError("open_gripper: band already flat");
  }
  GripperState next;
  next.band_state = BandState::Flat;
  next.holding = false;
  return next;
}

}  // namespace uamsim::grip
