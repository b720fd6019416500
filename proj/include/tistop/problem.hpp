#pragma once

#include <string>
#include <vector>

#include "tistop/diffusion.hpp"
#include "tistop/discount.hpp"
#include "tistop/payoff.hpp"

namespace tistop {

/// Diffusion, discount and payoff bundled together; validated on construction.
class ProblemInstance {
public:
    ProblemInstance(DiffusionSpec diffusion, DiscountSpec discount, PayoffSpec payoff, std::string label = "");

    const DiffusionSpec& diffusion() const { return diffusion_; }
    const DiscountSpec& discount() const { return discount_; }
    const PayoffSpec& payoff() const { return payoff_; }
    const std::string& label() const { return label_; }
    const Interval& state_space() const { return diffusion_.state_space(); }

    /// Lipschitz warnings and declared (unchecked) assumptions.
    const std::vector<std::string>& notes() const { return notes_; }

    /// Same problem with the closed-form resolvent paths disabled.
    ProblemInstance with_custom_diffusion() const;
    ProblemInstance with_discount(DiscountSpec d) const;

private:
    DiffusionSpec diffusion_;
    DiscountSpec discount_;
    PayoffSpec payoff_;
    std::string label_;
    std::vector<std::string> notes_;
};

}  // namespace tistop
