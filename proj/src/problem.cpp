#include "tistop/problem.hpp"

namespace tistop {

ProblemInstance::ProblemInstance(DiffusionSpec diffusion, DiscountSpec discount, PayoffSpec payoff, std::string label)
    : diffusion_(std::move(diffusion)), discount_(std::move(discount)), payoff_(std::move(payoff)), label_(std::move(label)) {
    notes_ = diffusion_.validate();
    payoff_.validate(diffusion_.state_space());
    notes_.push_back("integrability of the discounted payoff is assumed, not checked");
}

ProblemInstance ProblemInstance::with_custom_diffusion() const {
    return ProblemInstance(diffusion_.as_custom(), discount_, payoff_, label_);
}

ProblemInstance ProblemInstance::with_discount(DiscountSpec d) const {
    return ProblemInstance(diffusion_, std::move(d), payoff_, label_);
}

}  // namespace tistop
