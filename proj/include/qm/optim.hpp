#pragma once

#include <span>
#include <string>
#include <vector>

namespace qm {

enum class OptimizerKind { Sgd, RmsProp, Adam };

std::string optimizer_kind_name(OptimizerKind kind);
OptimizerKind optimizer_kind_from_name(const std::string& name);

struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::Sgd;
    double learning_rate = 1e-2;
    double decay = 0.99; // RmsProp accumulator decay
    double beta1 = 0.9;  // Adam first-moment decay
    double beta2 = 0.999;
    double eps = 1e-8;

    /// ConfigError unless decay/beta1/beta2 in (0,1), eps > 0 and
    /// learning_rate >= 0 (0 freezes the group, used by the regime
    /// equivalence check).
    void validate() const;

    static OptimizerSpec sgd(double lr);
    static OptimizerSpec rmsprop(double lr);
    static OptimizerSpec adam(double lr);
};

/// A named block of parameters bound to one optimizer and its state.
/// Single-owner mutable state; the training loop steps groups sequentially.
class ParamGroup {
  public:
    ParamGroup(std::string name, std::vector<double> values, OptimizerSpec opt);

    /// One update:
    ///   SGD:     v -= lr * g
    ///   RMSProp: s = decay*s + (1-decay)*g^2;  v -= lr * g / (sqrt(s) + eps)
    ///   Adam:    m, u moment updates with bias correction;
    ///            v -= lr * m_hat / (sqrt(u_hat) + eps)
    /// ValidationError on shape mismatch, NumericError on non-finite grads.
    void step(std::span<const double> grads);

    const std::string& name() const { return name_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    const OptimizerSpec& spec() const { return opt_; }
    long step_count() const { return step_count_; }

  private:
    std::string name_;
    std::vector<double> values_;
    OptimizerSpec opt_;
    std::vector<double> acc1_; // RmsProp mean square / Adam first moment
    std::vector<double> acc2_; // Adam second moment
    long step_count_ = 0;
};

struct GroupSpec {
    std::string name;
    std::vector<double> init;
    OptimizerSpec opt;
};

/// ConfigError on an empty list or duplicate names.
std::vector<ParamGroup> make_groups(std::span<const GroupSpec> specs);

} // namespace qm
