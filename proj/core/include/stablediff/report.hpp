#pragma once

#include <string>

#include "stablediff/asymptotics.hpp"
#include "stablediff/validate.hpp"

namespace stablediff {

// JSON documents carry "schema": 1. Non-finite numbers are written as the
// strings "inf", "-inf" or "nan".
std::string analysis_json(const RegimeReport& report, const LimitLaw& law, const std::string& model,
                          const std::string& observable);

// Rebuilds the parts of a LimitLaw needed to evaluate its CF.
LimitLaw law_from_analysis_json(const std::string& text);

std::string validation_json(const ValidationReport& report, const std::string& sample_file);

// Columns xi, ecf_re, ecf_im, se, target_re, target_im.
std::string validation_plot_csv(const ValidationReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stablediff
