#pragma once

#include <filesystem>
#include <string>

#include "vertiopt/optimizer.hpp"
#include "vertiopt/simulator.hpp"

namespace vertiopt {

// JSON config documents. Missing keys keep their defaults; unknown keys are
// rejected so typos do not pass silently.
std::string sim_config_to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const std::string& text);
std::string nsga_config_to_json(const NsgaConfig& cfg);
NsgaConfig nsga_config_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace vertiopt
