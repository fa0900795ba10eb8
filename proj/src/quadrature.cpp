#include "gaussdyn/quadrature.hpp"

#include <algorithm>
#include <sstream>

#include "gaussdyn/errors.hpp"

namespace gaussdyn::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

bool by_error(const Panel& x, const Panel& y) { return x.error < y.error; }

bool at_roundoff_floor(const Panel& p) {
    if (p.error <= 50.0 * kEps * p.resabs * (1.0 + 1e-9)) return true;
    // Further bisection would not produce distinct abscissae.
    const double scale = std::max(std::abs(p.a), std::abs(p.b));
    return (p.b - p.a) <= 1000.0 * kEps * scale;
}

}  // namespace

double kronrod_error(double kronrod, double gauss, double resabs, double resasc) noexcept {
    double err = std::abs(kronrod - gauss);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > kTiny / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * resabs, err);
    }
    return err;
}

void AdaptiveState::add(const Panel& p) {
    value_ += p.value;
    error_ += p.error;
    active_.push_back(p);
    std::push_heap(active_.begin(), active_.end(), by_error);
}

void AdaptiveState::resum() {
    value_ = 0.0;
    error_ = 0.0;
    for (const auto& p : active_) {
        value_ += p.value;
        error_ += p.error;
    }
    for (const auto& p : frozen_) {
        value_ += p.value;
        error_ += p.error;
    }
}

bool AdaptiveState::done() {
    for (;;) {
        const double tol = std::max(opts_.abs_tol, opts_.rel_tol * std::abs(value_));
        if (error_ <= tol) return true;
        if (active_.empty()) {
            roundoff_ = true;
            return true;
        }
        // Worst panel cannot be refined any further: set it aside.
        if (at_roundoff_floor(active_.front())) {
            std::pop_heap(active_.begin(), active_.end(), by_error);
            frozen_.push_back(active_.back());
            active_.pop_back();
            roundoff_ = true;
            continue;
        }
        if (active_.size() + frozen_.size() + 1 > opts_.max_panels) {
            resum();
            std::ostringstream msg;
            msg << "adaptive quadrature exhausted its budget of " << opts_.max_panels
                << " panels; attained error estimate " << error_ << " (tolerance " << tol << ")";
            throw QuadratureFailure(msg.str(), error_);
        }
        return false;
    }
}

Panel AdaptiveState::take_worst() {
    std::pop_heap(active_.begin(), active_.end(), by_error);
    Panel p = active_.back();
    active_.pop_back();
    value_ -= p.value;
    error_ -= p.error;
    if (++splits_ % 512 == 0) resum();
    return p;
}

Result AdaptiveState::finish(std::size_t evaluations) const {
    Result r;
    // Sum small contributions first.
    std::vector<Panel> all = active_;
    all.insert(all.end(), frozen_.begin(), frozen_.end());
    std::sort(all.begin(), all.end(),
              [](const Panel& x, const Panel& y) { return std::abs(x.value) < std::abs(y.value); });
    for (const auto& p : all) {
        r.value += p.value;
        r.abs_error += p.error;
    }
    r.evaluations = evaluations;
    r.panels = all.size();
    r.roundoff_limited = roundoff_ && r.abs_error > std::max(opts_.abs_tol, opts_.rel_tol * std::abs(r.value));
    return r;
}

}  // namespace gaussdyn::quad
