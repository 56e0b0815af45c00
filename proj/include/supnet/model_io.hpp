#pragma once

#include <string>

#include "supnet/assemble.hpp"
#include "supnet/cover.hpp"
#include "supnet/operators.hpp"

namespace supnet {

/// JSON sample sets: {"dim", "m", "n", "points": [[[f64,...] x n] x N]}.
void save_samples(const SampleSet& samples, const std::string& path);
SampleSet load_samples(const std::string& path);

std::string model_to_json(const FunctionalApproximant& g);
FunctionalApproximant model_from_json(const std::string& text);
void save_model(const FunctionalApproximant& g, const std::string& path);
FunctionalApproximant load_model(const std::string& path);

std::string operator_to_json(const FiniteRankOperator& g);
FiniteRankOperator operator_from_json(const std::string& text);
void save_operator(const FiniteRankOperator& g, const std::string& path);
FiniteRankOperator load_operator(const std::string& path);

/// CSV with header point_index,f_value,g_value,abs_error,covered.
void save_report_csv(const ErrorReport& report, const std::string& path);
void save_operator_report_csv(const OperatorReport& report, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace supnet
