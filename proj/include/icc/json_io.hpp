#pragma once

#include <string>

#include "icc/icurry.hpp"

namespace icc {

// Versioned JSON interchange for ICurry programs. Emission is byte-stable:
// equal programs produce identical text (ordered keys, fixed indentation).
inline constexpr const char* kJsonFormat = "icurry-json/1";

std::string emit_json(const IProgram& program);

// Parses and structurally validates a document produced by emit_json (format
// tag, required fields, known discriminators). Semantic checks beyond shape
// are validate_icurry's job. Throws CompileError on malformed input.
IProgram parse_json(const std::string& text);

}  // namespace icc
