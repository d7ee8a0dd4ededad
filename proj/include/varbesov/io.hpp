#pragma once

#include <string>

#include "json.hpp"
#include "varbesov/atoms.hpp"
#include "varbesov/grid.hpp"

namespace varbesov {

/// {"dim": 1|2, "jmax": int, "jfine": int}; missing fields take the per-dimension defaults.
Grid grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const Grid& grid);

/// Row-major complex samples. Files ending in ".csv" hold one "re,im" (or "re") line
/// per sample; anything else is flat little-endian binary doubles re, im, re, im, ...
GridFunction read_function(const std::string& path, const Grid& grid);
void write_function(const std::string& path, const GridFunction& f);

/// Atoms as cube + sample payload; a stored decomposition can be re-synthesized
/// and re-validated without the original function.
nlohmann::json atomization_to_json(const Atomization& at);
Atomization atomization_from_json(const nlohmann::json& j);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace varbesov
