// iaf_neuron_psp.cpp: generated by nestmlc 0.1.0 from neuron iaf_neuron_psp. Do not edit.
//
// Uses the runtime shim declared in the module file:
//   nestml_shim::{Node, RingBuffer, GuardViolation, UnknownBuffer, E,
//   Dictionary, update_value, resolution, steps, min_delay_steps,
//   send_spike, log_info}
// and std::{exp, log, pow, min, max}.

#include "iaf_neuron_psp.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

iaf_neuron_psp::PSPHelpers::PSPHelpers() {
  P_.C_m = 250;
  P_.tau_m = 10;
  P_.tau_syn = 2;
  P_.E_L = (-70);
  P_.I_e = 0;
  calibrate();
  S_.V_m = 0.0;
  S_.r = 0;
  check_guards();
}

void iaf_neuron_psp::PSPHelpers::calibrate() {
  V_.h = nestml_shim::resolution();
  V_.P11 = std::exp(((-V_.h) / P_.tau_syn));
  V_.P33 = std::exp(((-V_.h) / P_.tau_m));
  V_.P30 = ((P_.tau_m / P_.C_m) * (1 - V_.P33));
  V_.P32 = (((1.0 / P_.C_m) * (V_.P33 - V_.P11)) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn)));
  V_.P31 = (((1.0 / P_.C_m) * (((V_.P33 - V_.P11) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn))) - (V_.h * V_.P11))) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn)));
}

void iaf_neuron_psp::PSPHelpers::check_guards() const {
  if (!(P_.C_m > 0)) {
    throw nestml_shim::GuardViolation("C_m", "C_m > 0");
  }
  if (!(P_.tau_m > 0)) {
    throw nestml_shim::GuardViolation("tau_m", "tau_m > 0");
  }
  if (!(P_.tau_syn > 0)) {
    throw nestml_shim::GuardViolation("tau_syn", "tau_syn > 0");
  }
  if (!(S_.V_m >= (-99.0))) {
    throw nestml_shim::GuardViolation("V_m", "V_m >= -99.0");
  }
}

double iaf_neuron_psp::PSPHelpers::get_V_m() const {
  return S_.V_m;
}

void iaf_neuron_psp::PSPHelpers::set_V_m(double value) {
  S_.V_m = value;
  check_guards();
}

long iaf_neuron_psp::PSPHelpers::get_r() const {
  return S_.r;
}

void iaf_neuron_psp::PSPHelpers::set_r(long value) {
  S_.r = value;
}

double iaf_neuron_psp::PSPHelpers::get_C_m() const {
  return P_.C_m;
}

void iaf_neuron_psp::PSPHelpers::set_C_m(double value) {
  P_.C_m = value;
  check_guards();
}

double iaf_neuron_psp::PSPHelpers::get_tau_m() const {
  return P_.tau_m;
}

void iaf_neuron_psp::PSPHelpers::set_tau_m(double value) {
  P_.tau_m = value;
  check_guards();
}

double iaf_neuron_psp::PSPHelpers::get_tau_syn() const {
  return P_.tau_syn;
}

void iaf_neuron_psp::PSPHelpers::set_tau_syn(double value) {
  P_.tau_syn = value;
  check_guards();
}

double iaf_neuron_psp::PSPHelpers::get_E_L() const {
  return P_.E_L;
}

void iaf_neuron_psp::PSPHelpers::set_E_L(double value) {
  P_.E_L = value;
}

double iaf_neuron_psp::PSPHelpers::get_I_e() const {
  return P_.I_e;
}

void iaf_neuron_psp::PSPHelpers::set_I_e(double value) {
  P_.I_e = value;
}

double iaf_neuron_psp::PSPHelpers::get_V_rel() const {
  return (S_.V_m + P_.E_L);
}

void iaf_neuron_psp::PSPHelpers::computePSPStep(double y0, double y1, double y2) {
  if ((S_.r == 0)) {
    S_.V_m = ((((V_.P30 * (y0 + P_.I_e)) + (V_.P31 * y1)) + (V_.P32 * y2)) + (V_.P33 * S_.V_m));
  } else {
    S_.r = (S_.r - 1);
  }
}

void iaf_neuron_psp::PSPHelpers::get_status(nestml_shim::Dictionary& d) const {
  d["C_m"] = get_C_m();
  d["tau_m"] = get_tau_m();
  d["tau_syn"] = get_tau_syn();
  d["E_L"] = get_E_L();
  d["I_e"] = get_I_e();
  d["V_m"] = get_V_m();
  d["r"] = get_r();
  d["V_rel"] = get_V_rel();
}

void iaf_neuron_psp::PSPHelpers::set_status(const nestml_shim::Dictionary& d) {
  Parameters_ p = P_;
  State_ s = S_;
  nestml_shim::update_value(d, "C_m", p.C_m);
  nestml_shim::update_value(d, "tau_m", p.tau_m);
  nestml_shim::update_value(d, "tau_syn", p.tau_syn);
  nestml_shim::update_value(d, "E_L", p.E_L);
  nestml_shim::update_value(d, "I_e", p.I_e);
  nestml_shim::update_value(d, "V_m", s.V_m);
  nestml_shim::update_value(d, "r", s.r);
  std::swap(P_, p);
  std::swap(S_, s);
  try {
    check_guards();
  } catch (...) {
    std::swap(P_, p);
    std::swap(S_, s);
    throw;
  }
  calibrate();
}

iaf_neuron_psp::iaf_neuron_psp() {
  P_.tau_syn = 2;
  calibrate();
  S_.y0 = 0.0;
  S_.y2 = 0.0;
  S_.y1 = 0.0;
  check_guards();
}

void iaf_neuron_psp::calibrate() {
  V_.h = nestml_shim::resolution();
  V_.P11 = std::exp(((-V_.h) / P_.tau_syn));
  V_.P21 = (V_.h * V_.P11);
  V_.PSCInitialValue = ((1 * nestml_shim::E) / P_.tau_syn);
}

void iaf_neuron_psp::check_guards() const {
  if (!(P_.tau_syn > 0)) {
    throw nestml_shim::GuardViolation("tau_syn", "tau_syn > 0");
  }
}

double iaf_neuron_psp::get_y0() const {
  return S_.y0;
}

void iaf_neuron_psp::set_y0(double value) {
  S_.y0 = value;
}

double iaf_neuron_psp::get_y2() const {
  return S_.y2;
}

void iaf_neuron_psp::set_y2(double value) {
  S_.y2 = value;
}

double iaf_neuron_psp::get_y1() const {
  return S_.y1;
}

void iaf_neuron_psp::set_y1(double value) {
  S_.y1 = value;
}

double iaf_neuron_psp::get_tau_syn() const {
  return P_.tau_syn;
}

void iaf_neuron_psp::set_tau_syn(double value) {
  P_.tau_syn = value;
  check_guards();
}

void iaf_neuron_psp::get_status(nestml_shim::Dictionary& d) const {
  d["tau_syn"] = get_tau_syn();
  d["y0"] = get_y0();
  d["y2"] = get_y2();
  d["y1"] = get_y1();
}

void iaf_neuron_psp::set_status(const nestml_shim::Dictionary& d) {
  Parameters_ p = P_;
  State_ s = S_;
  nestml_shim::update_value(d, "tau_syn", p.tau_syn);
  nestml_shim::update_value(d, "y0", s.y0);
  nestml_shim::update_value(d, "y2", s.y2);
  nestml_shim::update_value(d, "y1", s.y1);
  std::swap(P_, p);
  std::swap(S_, s);
  try {
    check_guards();
  } catch (...) {
    std::swap(P_, p);
    std::swap(S_, s);
    throw;
  }
  calibrate();
}

void iaf_neuron_psp::init_buffers() {
  B_.spikeBuffer.clear();
  B_.currentBuffer.clear();
}

const std::vector<std::string>& iaf_neuron_psp::recordables() {
  static const std::vector<std::string> names = {
    "y0",
    "y2",
    "y1",
  };
  return names;
}

void iaf_neuron_psp::update(long step) {
  step_ = step;
  const double t = step * nestml_shim::resolution();
  PSP_.computePSPStep(S_.y0, S_.y1, S_.y2);
  S_.y2 = ((V_.P21 * S_.y1) + (V_.P11 * S_.y2));
  S_.y1 = ((S_.y1 * V_.P11) + (V_.PSCInitialValue * B_.spikeBuffer.get_sum(t)));
  S_.y0 = B_.currentBuffer.get_sum(t);
}

void iaf_neuron_psp::handle_spike(const std::string& buffer, double weight, long step) {
  if (buffer == "spikeBuffer") {
    B_.spikeBuffer.add(step, weight);
    return;
  }
  throw nestml_shim::UnknownBuffer(buffer);
}

void iaf_neuron_psp::handle_current(const std::string& buffer, double amplitude, long step) {
  if (buffer == "currentBuffer") {
    B_.currentBuffer.add(step, amplitude);
    return;
  }
  throw nestml_shim::UnknownBuffer(buffer);
}
