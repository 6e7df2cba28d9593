// iaf_pspmodule.cpp: generated by nestmlc 0.1.0 from module iaf_psp. Do not edit.

#include <map>
#include <stdexcept>
#include <string>

namespace nestml_shim {

  inline constexpr double E = 2.718281828459045;

  class Node {
  public:
    virtual ~Node() = default;
  };

  class RingBuffer {
  public:
    void add(long step, double value);
    double get_sum(double t) const;
    void advance();
    void clear();
  };

  struct GuardViolation : std::runtime_error {
    GuardViolation(const std::string& name, const std::string& guard);
  };

  struct UnknownBuffer : std::runtime_error {
    explicit UnknownBuffer(const std::string& buffer);
  };

  using Dictionary = std::map<std::string, double>;
  void update_value(const Dictionary& d, const std::string& key, double& value);
  void update_value(const Dictionary& d, const std::string& key, long& value);

  double resolution();
  long steps(double ms);
  long min_delay_steps();
  void send_spike(const Node& node, long step);
  void log_info(const std::string& message);

  class Registry {
  public:
    template <typename Model>
    void add(const std::string& name);
  };

}  // namespace nestml_shim

#include "iaf_neuron_psp.h"

void register_iaf_psp(nestml_shim::Registry& registry) {
  registry.add<iaf_neuron_psp>("iaf_neuron_psp");
}
