#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "valfit/learn.hpp"
#include "valfit/learning_set.hpp"
#include "valfit/model.hpp"
#include "valfit/synth.hpp"

// Serialization. Models, learning sets and fit results travel as JSON;
// alternative performance tables and experiment results as CSV. Numeric
// fields are written with enough digits to round-trip exactly, so repeated
// runs produce byte-identical files. Every parse error is reported as
// IoError with a short description.

namespace valfit {

std::string model_to_json(const AdditiveModel& model);
AdditiveModel model_from_json(const std::string& text);

std::string learning_set_to_json(const LearningSet& ls);
// Criteria may be supplied inline in the JSON or separately; the inline ones
// win when present.
LearningSet learning_set_from_json(const std::string& text);

// CSV with header "id,<crit1>,<crit2>,..."; the criterion columns must match
// the given scales in order.
std::string alternatives_to_csv(const std::vector<Alternative>& alts,
                                const std::vector<CriterionScale>& criteria);
std::vector<Alternative> alternatives_from_csv(const std::string& text,
                                               const std::vector<CriterionScale>& criteria);
// Reads the header as criterion ids with unknown bounds (filled as [0,1]);
// used when the caller has no scale list yet.
std::vector<CriterionScale> csv_header_criteria(const std::string& text);

std::string fit_result_to_json(const FitResult& result);

// One row per experiment cell. includeSeconds controls whether the wall-time
// column is emitted (timings are not reproducible and can be left out when
// comparing files).
std::string experiments_to_csv(const std::vector<ExperimentResult>& rows, bool includeSeconds = true);
std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace valfit
