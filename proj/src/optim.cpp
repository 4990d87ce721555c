#include "qm/optim.hpp"

#include <cmath>
#include <set>

#include "qm/errors.hpp"

namespace qm {

std::string optimizer_kind_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Sgd: return "sgd";
        case OptimizerKind::RmsProp: return "rmsprop";
        case OptimizerKind::Adam: return "adam";
    }
    throw ConfigError("unknown optimizer kind");
}

OptimizerKind optimizer_kind_from_name(const std::string& name) {
    if (name == "sgd") return OptimizerKind::Sgd;
    if (name == "rmsprop") return OptimizerKind::RmsProp;
    if (name == "adam") return OptimizerKind::Adam;
    throw ConfigError("unknown optimizer kind '" + name + "'");
}

void OptimizerSpec::validate() const {
    if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
        throw ConfigError("learning rate must be finite and >= 0");
    }
    auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (kind == OptimizerKind::RmsProp && !in_unit(decay)) {
        throw ConfigError("rmsprop decay must be in (0, 1)");
    }
    if (kind == OptimizerKind::Adam && (!in_unit(beta1) || !in_unit(beta2))) {
        throw ConfigError("adam betas must be in (0, 1)");
    }
    if (kind != OptimizerKind::Sgd && !(eps > 0.0)) {
        throw ConfigError("optimizer eps must be > 0");
    }
}

OptimizerSpec OptimizerSpec::sgd(double lr) {
    OptimizerSpec s;
    s.kind = OptimizerKind::Sgd;
    s.learning_rate = lr;
    return s;
}

OptimizerSpec OptimizerSpec::rmsprop(double lr) {
    OptimizerSpec s;
    s.kind = OptimizerKind::RmsProp;
    s.learning_rate = lr;
    return s;
}

OptimizerSpec OptimizerSpec::adam(double lr) {
    OptimizerSpec s;
    s.kind = OptimizerKind::Adam;
    s.learning_rate = lr;
    return s;
}

ParamGroup::ParamGroup(std::string name, std::vector<double> values, OptimizerSpec opt)
    : name_(std::move(name)), values_(std::move(values)), opt_(opt) {
    opt_.validate();
    if (opt_.kind != OptimizerKind::Sgd) {
        acc1_.assign(values_.size(), 0.0);
    }
    if (opt_.kind == OptimizerKind::Adam) {
        acc2_.assign(values_.size(), 0.0);
    }
}

void ParamGroup::step(std::span<const double> grads) {
    if (grads.size() != values_.size()) {
        throw ValidationError("gradient shape does not match group '" + name_ + "'");
    }
    for (double g : grads) {
        if (!std::isfinite(g)) {
            throw NumericError("non-finite gradient in group '" + name_ + "'");
        }
    }
    ++step_count_;
    const double lr = opt_.learning_rate;
    switch (opt_.kind) {
        case OptimizerKind::Sgd:
            for (std::size_t i = 0; i < values_.size(); ++i) {
                values_[i] -= lr * grads[i];
            }
            break;
        case OptimizerKind::RmsProp:
            for (std::size_t i = 0; i < values_.size(); ++i) {
                const double g = grads[i];
                acc1_[i] = opt_.decay * acc1_[i] + (1.0 - opt_.decay) * g * g;
                values_[i] -= lr * g / (std::sqrt(acc1_[i]) + opt_.eps);
            }
            break;
        case OptimizerKind::Adam: {
            const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(step_count_));
            const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(step_count_));
            for (std::size_t i = 0; i < values_.size(); ++i) {
                const double g = grads[i];
                acc1_[i] = opt_.beta1 * acc1_[i] + (1.0 - opt_.beta1) * g;
                acc2_[i] = opt_.beta2 * acc2_[i] + (1.0 - opt_.beta2) * g * g;
                const double m_hat = acc1_[i] / bc1;
                const double u_hat = acc2_[i] / bc2;
                values_[i] -= lr * m_hat / (std::sqrt(u_hat) + opt_.eps);
            }
            break;
        }
    }
}

std::vector<ParamGroup> make_groups(std::span<const GroupSpec> specs) {
    if (specs.empty()) {
        throw ConfigError("optimizer configuration names no parameter groups");
    }
    std::set<std::string> names;
    std::vector<ParamGroup> groups;
    groups.reserve(specs.size());
    for (const GroupSpec& s : specs) {
        if (!names.insert(s.name).second) {
            throw ConfigError("duplicate parameter group '" + s.name + "'");
        }
        groups.emplace_back(s.name, s.init, s.opt);
    }
    return groups;
}

} // namespace qm
