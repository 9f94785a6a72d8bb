#pragma once

#include <string>

#include "tabrl/experiment.hpp"
#include "tabrl/mdp.hpp"

namespace tabrl {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

std::string to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const std::string& text);

std::string to_json(const ExperimentConfig& config);
/// Strict: unknown keys anywhere in the document are an error.
ExperimentConfig config_from_json(const std::string& text);

std::string load_text_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& content);

}  // namespace tabrl
