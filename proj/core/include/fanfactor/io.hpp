#pragma once

#include <iosfwd>
#include <string>

#include "fanfactor/collapse.hpp"
#include "fanfactor/factorize.hpp"
#include "fanfactor/fan.hpp"
#include "fanfactor/lifted.hpp"

namespace fanfactor {

// JSON documents. Integers are plain numbers while they fit into 53 bits and
// decimal strings beyond that, so round trips stay exact. Loading normalizes
// non-primitive rays and reports each one on the warnings stream.

Fan fan_from_json(const std::string& text, std::ostream* warnings = nullptr);
std::string fan_to_json(const Fan& f, const std::string& name = "");

LiftedFan lifted_from_json(const std::string& text, std::ostream* warnings = nullptr);
std::string lifted_to_json(const LiftedFan& s, const std::string& name = "");

Script script_from_json(const std::string& text, std::ostream* warnings = nullptr);
std::string script_to_json(const Script& sc);

std::string factorization_to_json(const FactorizationResult& r);

std::string graph_to_dot(const LiftedFan& s, const CircuitGraph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fanfactor
