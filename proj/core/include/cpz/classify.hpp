#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpz/levy.hpp"
#include "cpz/product.hpp"

namespace cpz {

enum class DirectionMode { LI, LR, CollinearRational, Mixed };
const char* to_string(DirectionMode mode);

// Directions that coincide exactly (same rational vector and psi literal)
// form one group; their coefficient schemes are pooled into one row.
struct DirectionGroup {
    RationalVector direction;
    std::size_t psi_class = 0;
    double psi = 1.0;
    std::vector<std::size_t> source_directions;
    std::vector<std::pair<std::size_t, std::size_t>> schemes;  // (l, k), zero schemes omitted
};

std::vector<DirectionGroup> group_directions(const ValidatedSpec& spec);

struct DirectionCondition {
    DirectionMode mode = DirectionMode::Mixed;
    std::size_t groups = 0;
    std::size_t rank = 0;                 // rank over Q of the grouped rational directions
    std::vector<Rational> ratios;         // collinear case: a_g = ratios[g] * a_0
    std::vector<std::string> declared_psi;
    std::string evidence;
};

DirectionCondition direction_condition(const ValidatedSpec& spec);

// beta_g(p) = sum of the group's coefficients at p.
struct SignRow {
    std::size_t group = 0;                          // 1-based group index
    std::vector<std::pair<std::uint64_t, double>> beta;  // p <= prime_limit
    bool negative_somewhere = false;                // decided over all primes
    bool negative_infinitely_often = false;
    std::vector<std::uint64_t> exceptional_negative;  // finitely many negatives outside the generic pattern
};

struct SignProfile {
    std::vector<SignRow> rows;
};

// Requires strict coefficients (throws UnsupportedError otherwise).
SignProfile sign_profile(const ValidatedSpec& spec, std::uint64_t prime_limit);

enum class Verdict { CompoundPoisson, NotCharacteristic, OutOfTheoremScope, Inconclusive };
enum class Theorem { Tuple, Rank, Main, AtomCertificate, None };
const char* to_string(Verdict v);
const char* to_string(Theorem t);

struct ClassificationResult {
    Verdict verdict = Verdict::Inconclusive;
    Theorem theorem_used = Theorem::None;
    // (l, p) with l the 1-based group index; primes reported up to the report limit
    // plus every exceptional negative prime.
    std::vector<std::pair<std::size_t, std::uint64_t>> offending_primes;
    bool offending_infinite = false;
    DirectionCondition directions;
    std::vector<std::string> notes;
};

struct ClassifyOptions {
    std::uint64_t report_limit = 100;
};

ClassificationResult classify(const ValidatedSpec& spec, std::span<const double> sigma,
                              ClassifyOptions options = {});

enum class AtomOutcome { CertifiedUpToTruncation, NegativeAtomFound, Inconclusive };
const char* to_string(AtomOutcome o);

struct AtomCertificate {
    AtomOutcome outcome = AtomOutcome::Inconclusive;
    double min_mass = 0.0;
    std::size_t atoms_checked = 0;
    std::optional<LevyAtom> negative_atom;   // first negative atom in key order
    double omitted_tail = 0.0;
    std::string note;
};

AtomCertificate certify_by_atoms(const ValidatedSpec& spec, std::span<const double> sigma,
                                 const TruncationPolicy& policy, Parallelism par = {});

}  // namespace cpz
