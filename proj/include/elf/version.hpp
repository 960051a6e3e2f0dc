#pragma once

namespace elf {

// "<version> (<git describe>)", fixed at configure time.
const char* version_string();

}  // namespace elf
