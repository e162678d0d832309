#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpz/classify.hpp"
#include "cpz/product.hpp"
#include "cpz/rational.hpp"

namespace cpz::catalog {

struct Expected {
    bool infinitely_divisible = true;   // the mathematical truth
    Verdict verdict = Verdict::CompoundPoisson;
    Theorem theorem = Theorem::None;
    std::optional<AtomOutcome> atoms;   // resolution of OutOfTheoremScope
};

// Exact coefficient of the merged atom at x = n log p (one-dimensional entries):
// the mass is coefficient * p^(-n sigma).
using ClosedForm = std::function<Rational(std::uint64_t p, unsigned n)>;

struct Entry {
    std::string name;
    std::string description;
    ProductSpec spec;
    std::vector<double> sigma;   // default point with convergence margin 2
    Expected expected;
    std::optional<ClosedForm> closed_form;
};

struct Params {
    double alpha = 0.5;   // rank_shift shift, > 0
    int lm = 1;           // tuple_rank_*: which of L1, L2
};

std::vector<std::string> list();
// Throws LookupError for unknown names, DomainError for bad parameters.
Entry get(const std::string& name, const Params& params = {});

// closed_form coefficient times atom_weight, rounded once.
double closed_form_mass(const Entry& entry, std::uint64_t p, unsigned n, double sigma);

}  // namespace cpz::catalog
