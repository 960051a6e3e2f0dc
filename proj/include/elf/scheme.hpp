#pragma once

#include <string>

namespace elf {

// Ancilla-free (bias Delta, period pi per angle) or ancilla-based (bias Lambda, period 2pi).
enum class SchemeKind { AF, AB };

inline const char* to_string(SchemeKind s) { return s == SchemeKind::AF ? "af" : "ab"; }

}  // namespace elf
