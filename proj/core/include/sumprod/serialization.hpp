#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sumprod/branching.hpp"
#include "sumprod/entropy.hpp"
#include "sumprod/experiments.hpp"
#include "sumprod/intervals.hpp"
#include "sumprod/measure.hpp"
#include "sumprod/parameters.hpp"
#include "sumprod/projection.hpp"

namespace sumprod {

// 12 significant digits, the format of every floating field we emit.
std::string fmt(double x);

// {"m": 2, "R": [4, 1, 2]}
std::string profile_to_json(const BranchingProfile& p);
BranchingProfile profile_from_json(const std::string& text);

// {"intervals": [{"lo": 0, "hi": 3, "tag": "low"}, ...]}
std::string family_to_json(const IntervalFamily& f);
IntervalFamily family_from_json(const std::string& text);

// {"dim": 2, "n": 4, "atoms": [[[x, y], weight, mass], ...]}; mass is optional
// on input, weights alone are converted to integer masses on a 2^-40 grid.
std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);

std::string params_to_json(const ParameterSet& p);
ParameterSet params_from_json(const std::string& text);

// Keys: params, family, deltas, gammas, max_atoms, seed, out, format. Missing keys keep defaults.
std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);

std::string to_json(const EntropyChainReport& r);
std::string to_json(const ProjectionAverageReport& r);
std::string to_json(const ProjectionEntropyReport& r);
std::string to_json(const LadderResult& r);
std::string to_json(const GreedyResult& r);
std::string to_json(const std::vector<SharpnessRow>& rows);
std::string to_json(const std::vector<ExpansionRecord>& recs);
std::string to_json(const AssemblyReport& r);

void write_csv(std::ostream& out, const std::vector<SharpnessRow>& rows);
void write_csv(std::ostream& out, const LadderResult& r);
void write_csv(std::ostream& out, const GreedyResult& r);
// One row per (delta, gamma): the summary statistics.
void write_csv(std::ostream& out, const std::vector<ExpansionRecord>& recs);
// One row per (delta, gamma, c).
void write_csv_per_c(std::ostream& out, const std::vector<ExpansionRecord>& recs);
void write_csv(std::ostream& out, const ProjectionAverageReport& r);
void write_csv(std::ostream& out, const ProjectionEntropyReport& r);
// One row per partition block.
void write_csv(std::ostream& out, const AssemblyReport& r);

}  // namespace sumprod
