// iaf_neuron.cpp: generated by nestmlc 0.1.0 from neuron iaf_neuron. Do not edit.
//
// Uses the runtime shim declared in the module file:
//   nestml_shim::{Node, RingBuffer, GuardViolation, UnknownBuffer, E,
//   Dictionary, update_value, resolution, steps, min_delay_steps,
//   send_spike, log_info}
// and std::{exp, log, pow, min, max}.

#include "iaf_neuron.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

iaf_neuron::iaf_neuron() {
  P_.C_m = 250;
  P_.tau_m = 10;
  P_.tau_syn = 2;
  P_.E_L = (-70);
  P_.I_e = 0;
  P_.Theta = 15;
  P_.V_reset = (-70);
  P_.t_ref = 2;
  calibrate();
  S_.y0 = 0.0;
  S_.y1 = 0.0;
  S_.y2 = 0.0;
  S_.V_m = 0.0;
  S_.r = 0;
  check_guards();
}

void iaf_neuron::calibrate() {
  V_.h = nestml_shim::resolution();
  V_.P11 = std::exp(((-V_.h) / P_.tau_syn));
  V_.P22 = V_.P11;
  V_.P21 = (V_.h * V_.P11);
  V_.P33 = std::exp(((-V_.h) / P_.tau_m));
  V_.P30 = ((P_.tau_m / P_.C_m) * (1 - V_.P33));
  V_.P32 = (((1.0 / P_.C_m) * (V_.P33 - V_.P11)) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn)));
  V_.P31 = (((1.0 / P_.C_m) * (((V_.P33 - V_.P11) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn))) - (V_.h * V_.P11))) / ((static_cast<double>((-1)) / P_.tau_m) - (static_cast<double>((-1)) / P_.tau_syn)));
  V_.PSCInitialValue = ((1 * nestml_shim::E) / P_.tau_syn);
  V_.RefractoryCounts = nestml_shim::steps(P_.t_ref);
}

void iaf_neuron::check_guards() const {
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

double iaf_neuron::get_y0() const {
  return S_.y0;
}

void iaf_neuron::set_y0(double value) {
  S_.y0 = value;
}

double iaf_neuron::get_y1() const {
  return S_.y1;
}

void iaf_neuron::set_y1(double value) {
  S_.y1 = value;
}

double iaf_neuron::get_y2() const {
  return S_.y2;
}

void iaf_neuron::set_y2(double value) {
  S_.y2 = value;
}

double iaf_neuron::get_V_m() const {
  return S_.V_m;
}

void iaf_neuron::set_V_m(double value) {
  S_.V_m = value;
  check_guards();
}

long iaf_neuron::get_r() const {
  return S_.r;
}

void iaf_neuron::set_r(long value) {
  S_.r = value;
}

double iaf_neuron::get_C_m() const {
  return P_.C_m;
}

void iaf_neuron::set_C_m(double value) {
  P_.C_m = value;
  check_guards();
}

double iaf_neuron::get_tau_m() const {
  return P_.tau_m;
}

void iaf_neuron::set_tau_m(double value) {
  P_.tau_m = value;
  check_guards();
}

double iaf_neuron::get_tau_syn() const {
  return P_.tau_syn;
}

void iaf_neuron::set_tau_syn(double value) {
  P_.tau_syn = value;
  check_guards();
}

double iaf_neuron::get_E_L() const {
  return P_.E_L;
}

void iaf_neuron::set_E_L(double value) {
  P_.E_L = value;
}

double iaf_neuron::get_I_e() const {
  return P_.I_e;
}

void iaf_neuron::set_I_e(double value) {
  P_.I_e = value;
}

double iaf_neuron::get_Theta() const {
  return P_.Theta;
}

void iaf_neuron::set_Theta(double value) {
  P_.Theta = value;
}

double iaf_neuron::get_V_reset() const {
  return P_.V_reset;
}

void iaf_neuron::set_V_reset(double value) {
  P_.V_reset = value;
}

double iaf_neuron::get_t_ref() const {
  return P_.t_ref;
}

void iaf_neuron::set_t_ref(double value) {
  P_.t_ref = value;
}

double iaf_neuron::get_V_rel() const {
  return (S_.V_m + P_.E_L);
}

void iaf_neuron::set_V_rel(double v) {
  S_.V_m = (v - P_.E_L);
}

void iaf_neuron::get_status(nestml_shim::Dictionary& d) const {
  d["C_m"] = get_C_m();
  d["tau_m"] = get_tau_m();
  d["tau_syn"] = get_tau_syn();
  d["E_L"] = get_E_L();
  d["I_e"] = get_I_e();
  d["Theta"] = get_Theta();
  d["V_reset"] = get_V_reset();
  d["t_ref"] = get_t_ref();
  d["y0"] = get_y0();
  d["y1"] = get_y1();
  d["y2"] = get_y2();
  d["V_m"] = get_V_m();
  d["r"] = get_r();
  d["V_rel"] = get_V_rel();
}

void iaf_neuron::set_status(const nestml_shim::Dictionary& d) {
  Parameters_ p = P_;
  State_ s = S_;
  nestml_shim::update_value(d, "C_m", p.C_m);
  nestml_shim::update_value(d, "tau_m", p.tau_m);
  nestml_shim::update_value(d, "tau_syn", p.tau_syn);
  nestml_shim::update_value(d, "E_L", p.E_L);
  nestml_shim::update_value(d, "I_e", p.I_e);
  nestml_shim::update_value(d, "Theta", p.Theta);
  nestml_shim::update_value(d, "V_reset", p.V_reset);
  nestml_shim::update_value(d, "t_ref", p.t_ref);
  nestml_shim::update_value(d, "y0", s.y0);
  nestml_shim::update_value(d, "y1", s.y1);
  nestml_shim::update_value(d, "y2", s.y2);
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

void iaf_neuron::init_buffers() {
  B_.spikeBuffer.clear();
  B_.currentBuffer.clear();
}

const std::vector<std::string>& iaf_neuron::recordables() {
  static const std::vector<std::string> names = {
    "y0",
    "y1",
    "y2",
    "V_m",
    "r",
    "V_rel",
  };
  return names;
}

void iaf_neuron::update(long step) {
  step_ = step;
  const double t = step * nestml_shim::resolution();
  if ((S_.r == 0)) {
    S_.V_m = ((((V_.P30 * (S_.y0 + P_.I_e)) + (V_.P31 * S_.y1)) + (V_.P32 * S_.y2)) + (V_.P33 * S_.V_m));
  } else {
    S_.r = (S_.r - 1);
  }
  S_.y2 = ((V_.P21 * S_.y1) + (V_.P22 * S_.y2));
  S_.y1 = (S_.y1 * V_.P11);
  S_.y1 = (S_.y1 + (V_.PSCInitialValue * B_.spikeBuffer.get_sum(t)));
  if ((S_.V_m >= P_.Theta)) {
    S_.r = V_.RefractoryCounts;
    set_V_rel(P_.V_reset);
    nestml_shim::send_spike(*this, step_);
  }
  S_.y0 = B_.currentBuffer.get_sum(t);
}

void iaf_neuron::handle_spike(const std::string& buffer, double weight, long step) {
  if (buffer == "spikeBuffer") {
    B_.spikeBuffer.add(step, weight);
    return;
  }
  throw nestml_shim::UnknownBuffer(buffer);
}

void iaf_neuron::handle_current(const std::string& buffer, double amplitude, long step) {
  if (buffer == "currentBuffer") {
    B_.currentBuffer.add(step, amplitude);
    return;
  }
  throw nestml_shim::UnknownBuffer(buffer);
}
