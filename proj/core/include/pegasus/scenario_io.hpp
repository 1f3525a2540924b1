#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pegasus/sim_model.hpp"

namespace pegasus {

/// %.17g: doubles round-trip exactly through this representation.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Flat text scenario format: a header line "scenarios <m> <rows> <cols>",
/// then one line per scenario holding the initial-state fields followed by
/// the row-major noise entries, all space separated, doubles with 17
/// significant digits.
template <class State, class Action>
void write_scenarios(std::ostream& os, const SimModel<State, Action>& model,
                     const std::vector<Scenario<State>>& scenarios) {
  if (!model.state_to_text) throw std::invalid_argument("write_scenarios: model lacks state_to_text");
  if (scenarios.empty()) throw std::invalid_argument("write_scenarios: empty scenario list");
  os << "scenarios " << scenarios.size() << ' ' << scenarios[0].rows << ' ' << scenarios[0].cols
     << '\n';
  for (const auto& sc : scenarios) {
    os << model.state_to_text(sc.initial_state);
    for (double v : sc.noise) os << ' ' << format_double(v);
    os << '\n';
  }
}

template <class State, class Action>
std::vector<Scenario<State>> read_scenarios(std::istream& is, const SimModel<State, Action>& model) {
  if (!model.state_from_text) throw std::invalid_argument("read_scenarios: model lacks state_from_text");
  std::string tag;
  std::size_t m = 0;
  int rows = 0, cols = 0;
  if (!(is >> tag >> m >> rows >> cols) || tag != "scenarios")
    throw std::invalid_argument("read_scenarios: bad header");
  is.ignore();
  std::vector<Scenario<State>> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("read_scenarios: truncated file");
    const std::size_t entries = static_cast<std::size_t>(rows) * cols;
    // The state text is everything before the last rows*cols numbers.
    std::vector<std::string> tokens;
    std::istringstream ts(line);
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    if (tokens.size() < entries) throw std::invalid_argument("read_scenarios: short record");
    const std::size_t state_tokens = tokens.size() - entries;
    std::string state_text;
    for (std::size_t k = 0; k < state_tokens; ++k) {
      if (k) state_text += ' ';
      state_text += tokens[k];
    }
    Scenario<State> sc;
    sc.initial_state = model.state_from_text(state_text);
    sc.rows = rows;
    sc.cols = cols;
    sc.noise.reserve(entries);
    for (std::size_t k = state_tokens; k < tokens.size(); ++k) sc.noise.push_back(std::stod(tokens[k]));
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace pegasus
