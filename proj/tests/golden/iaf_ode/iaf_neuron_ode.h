// iaf_neuron_ode.h: generated by nestmlc 0.1.0 from neuron iaf_neuron_ode. Do not edit.
//
// Uses the runtime shim declared in the module file:
//   nestml_shim::{Node, RingBuffer, GuardViolation, UnknownBuffer, E,
//   Dictionary, update_value, resolution, steps, min_delay_steps,
//   send_spike, log_info}
// and std::{exp, log, pow, min, max}.

#ifndef IAF_ODE_IAF_NEURON_ODE_H
#define IAF_ODE_IAF_NEURON_ODE_H

#include <string>
#include <vector>

class iaf_neuron_ode : public nestml_shim::Node {
public:
  iaf_neuron_ode();

  void calibrate();
  void check_guards() const;
  void update(long step);
  void handle_spike(const std::string& buffer, double weight, long step);
  void handle_current(const std::string& buffer, double amplitude, long step);
  void init_buffers();
  void get_status(nestml_shim::Dictionary& d) const;
  void set_status(const nestml_shim::Dictionary& d);
  static const std::vector<std::string>& recordables();

  // state
  double get_V_m() const;
  void set_V_m(double value);
  long get_r() const;
  void set_r(long value);
  double get_I_shape__d1() const;
  void set_I_shape__d1(double value);
  double get_I_shape() const;
  void set_I_shape(double value);

  // parameters
  double get_tau_in() const;
  void set_tau_in(double value);
  double get_Tau() const;
  void set_Tau(double value);
  double get_C_m() const;
  void set_C_m(double value);
  double get_w() const;
  void set_w(double value);
  double get_I_e() const;
  void set_I_e(double value);
  double get_Theta() const;
  void set_Theta(double value);
  double get_V_reset() const;
  void set_V_reset(double value);
  double get_t_ref() const;
  void set_t_ref(double value);

  struct Parameters_ {
    double tau_in;  // ms
    double Tau;  // ms
    double C_m;  // pF
    double w;  // pA
    double I_e;  // pA
    double Theta;  // mV
    double V_reset;  // mV
    double t_ref;  // ms
  };

  struct State_ {
    double V_m;  // mV
    long r;  // integer
    double I_shape__d1;  // pA/ms
    double I_shape;  // pA
  };

  struct Internals_ {
    double h;  // ms
    long RefractoryCounts;  // integer
    double P11;  // real
    double P22;  // real
    double P21;  // ms
    double P33;  // real
    double P31;  // ms**2/pF
    double P32;  // mV/pA
    double P34;  // ms
  };

  struct Buffers_ {
    nestml_shim::RingBuffer spikeBuffer;
    nestml_shim::RingBuffer currentBuffer;
  };

  Parameters_ P_;
  State_ S_;
  Internals_ V_;
  Buffers_ B_;
  long step_ = 0;
};

#endif  // IAF_ODE_IAF_NEURON_ODE_H
