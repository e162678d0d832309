#pragma once

#include <complex>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "cpz/classify.hpp"
#include "cpz/levy.hpp"
#include "cpz/sampler.hpp"
#include "cpz/witness.hpp"

namespace cpz::io {

// Shortest decimal that parses back to the same binary64.
std::string format_double(double x);

nlohmann::json to_json(std::complex<double> z);
nlohmann::json to_json(const TruncationPolicy& policy);
nlohmann::json to_json(const ClassificationResult& result);
nlohmann::json to_json(const AtomCertificate& cert);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const SearchResult& result);
nlohmann::json to_json(const PhaseTargets& targets);

// Header p,r,l,mass,x_1..x_d; r is the multiple's scale along its direction
// (or ratio for merged atoms), l the 1-based first contributing direction.
void write_atoms_csv(std::ostream& out, const LevyMeasure& measure);
nlohmann::json measure_summary(const LevyMeasure& measure);

// Header x_1..x_d.
void write_samples_csv(std::ostream& out, const SampleSet& samples);
// {seed, n, c, bias_bound, ...}; bias_bound is the per-jump total variation bias.
nlohmann::json samples_summary(const SampleSet& samples);

}  // namespace cpz::io
