#include "monocube/forms.hpp"

#include <cmath>
#include <random>

#include "monocube/error.hpp"
#include "monocube/numeric.hpp"

namespace monocube {

SetFunction::SetFunction(std::shared_ptr<const MonotoneSet> set, Eigen::VectorXd values)
    : set_(std::move(set)), values_(std::move(values)) {
    if (!set_) throw Error("set function needs a set");
    if (static_cast<std::size_t>(values_.size()) != set_->size())
        throw Error("set function has " + std::to_string(values_.size()) + " values for " +
                    std::to_string(set_->size()) + " members");
    if (!values_.allFinite()) throw Error("set function values must be finite");
}

SetFunction::SetFunction(const MonotoneSet& set, Eigen::VectorXd values)
    : SetFunction(std::make_shared<const MonotoneSet>(set), std::move(values)) {}

SetFunction SetFunction::from(std::shared_ptr<const MonotoneSet> set, const std::function<double(Index)>& fn) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(set->size()));
    const auto members = set->members();
    for (std::size_t r = 0; r < members.size(); ++r) v[static_cast<Eigen::Index>(r)] = fn(members[r]);
    return {std::move(set), std::move(v)};
}

SetFunction SetFunction::constant(std::shared_ptr<const MonotoneSet> set, double c) {
    const auto size = static_cast<Eigen::Index>(set->size());
    return {std::move(set), Eigen::VectorXd::Constant(size, c)};
}

double SetFunction::at(Index x) const {
    const auto r = set_->rank(x);
    if (!r) throw Error("point " + std::to_string(x) + " is not a member");
    return values_[static_cast<Eigen::Index>(*r)];
}

double SetFunction::mean() const {
    CompensatedSum<> s;
    for (double v : values_) s += v;
    return s.value() / static_cast<double>(values_.size());
}

SetFunction dictator_function(std::shared_ptr<const MonotoneSet> set, int coord) {
    if (coord < 0 || coord >= set->dim()) throw Error("coordinate outside [0, n)");
    return SetFunction::from(std::move(set), [coord](Index x) { return static_cast<double>((x >> coord) & 1u); });
}

SetFunction weight_function(std::shared_ptr<const MonotoneSet> set) {
    return SetFunction::from(std::move(set), [](Index x) { return static_cast<double>(std::popcount(x)); });
}

SetFunction indicator_function(std::shared_ptr<const MonotoneSet> set, Index point) {
    return SetFunction::from(std::move(set), [point](Index x) { return x == point ? 1.0 : 0.0; });
}

SetFunction random_function(std::shared_ptr<const MonotoneSet> set, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return SetFunction::from(std::move(set), [&](Index) { return u(rng); });
}

double dirichlet_form(const SetFunction& f) {
    const MonotoneSet& a = f.set();
    const auto& v = f.values();
    const auto members = a.members();
    CompensatedSum<> energy;
    for (std::size_t r = 0; r < members.size(); ++r) {
        const Index x = members[r];
        for (int i = 0; i < a.dim(); ++i) {
            const auto nb = a.rank(x ^ (Index{1} << i));
            if (!nb) continue;
            const double d = v[static_cast<Eigen::Index>(r)] - v[static_cast<Eigen::Index>(*nb)];
            energy += d * d;
        }
    }
    return energy.value() / (4.0 * static_cast<double>(members.size()));
}

double variance(const SetFunction& f) {
    const double mu = f.mean();
    CompensatedSum<> s;
    for (double v : f.values()) s += (v - mu) * (v - mu);
    return s.value() / static_cast<double>(f.values().size());
}

std::optional<double> poincare_ratio(const SetFunction& f) {
    const double e = dirichlet_form(f);
    if (e <= 0.0) return std::nullopt;
    return variance(f) / e;
}

Restriction restrict(const SetFunction& f) {
    SplitPair sp = split(f.set());
    const Index half = Index{1} << (f.set().dim() - 1);

    auto slice1 = std::make_shared<const MonotoneSet>(sp.slice1);
    SetFunction f1 = SetFunction::from(slice1, [&](Index x) { return f.at(x + half); });

    std::optional<SetFunction> f0;
    if (sp.slice0) {
        auto slice0 = std::make_shared<const MonotoneSet>(*sp.slice0);
        f0 = SetFunction::from(slice0, [&](Index x) { return f.at(x); });
    }
    const double mean1 = f1.mean();
    const double mean0 = f0 ? f0->mean() : 0.0;
    return Restriction{std::move(sp), std::move(f0), std::move(f1), mean0, mean1};
}

double DecompositionReport::rhs() const {
    CompensatedSum<> s;
    for (const auto& [name, value] : terms) s += value;
    return s.value();
}

namespace {

void finish(DecompositionReport& rep) {
    rep.residual = std::abs(rep.lhs - rep.rhs());
    rep.relative_residual = rep.residual / std::max(std::abs(rep.lhs), kIdentityAbsFloor);
}

}  // namespace

DecompositionReport check_dirichlet_decomposition(const SetFunction& f, double tol) {
    DecompositionReport rep;
    rep.identity = "dirichlet";
    rep.tol = tol;
    rep.lhs = dirichlet_form(f);

    const Restriction r = restrict(f);
    const double a0 = r.split.density0;
    const double a1 = r.split.density1;
    const double a = f.set().density();

    rep.terms.emplace_back("upper_form", a1 / (2 * a) * dirichlet_form(r.f1));
    double lower = 0.0, cross = 0.0;
    if (r.f0) {
        lower = a0 / (2 * a) * dirichlet_form(*r.f0);
        CompensatedSum<> gap;
        const auto members0 = r.f0->set().members();
        for (std::size_t k = 0; k < members0.size(); ++k) {
            const double d = r.f0->values()[static_cast<Eigen::Index>(k)] - r.f1.at(members0[k]);
            gap += d * d;
        }
        cross = a0 / (4 * a) * gap.value() / static_cast<double>(members0.size());
    }
    rep.terms.emplace_back("lower_form", lower);
    rep.terms.emplace_back("cross", cross);
    finish(rep);
    return rep;
}

std::pair<double, double> variance_cross_coefficients(double a0, double a1) {
    const double a = (a0 + a1) / 2;
    const double expanded = (a1 * a0 * a0 + a0 * a1 * a1) / (8 * a * a * a);
    const double compact = a1 * a0 / ((a0 + a1) * (a0 + a1));
    return {expanded, compact};
}

DecompositionReport check_variance_decomposition(const SetFunction& f, double tol) {
    DecompositionReport rep;
    rep.identity = "variance";
    rep.tol = tol;
    rep.lhs = variance(f);

    const Restriction r = restrict(f);
    const double a0 = r.split.density0;
    const double a1 = r.split.density1;
    const double a = f.set().density();

    rep.terms.emplace_back("upper_variance", a1 / (2 * a) * variance(r.f1));
    if (r.f0) {
        const auto [expanded, compact] = variance_cross_coefficients(a0, a1);
        rep.coefficient_residual = std::abs(expanded - compact) / std::max(std::abs(compact), kIdentityAbsFloor);
        const double dm = r.mean1 - r.mean0;
        rep.terms.emplace_back("lower_variance", a0 / (2 * a) * variance(*r.f0));
        rep.terms.emplace_back("mean_gap", compact * dm * dm);
    } else {
        rep.terms.emplace_back("lower_variance", 0.0);
        rep.terms.emplace_back("mean_gap", 0.0);
    }
    finish(rep);
    return rep;
}

}  // namespace monocube
