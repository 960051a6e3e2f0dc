#include "elf/version.hpp"

namespace elf {

const char* version_string() { return ELF_VERSION " (" ELF_GIT_DESCRIBE ")"; }

}  // namespace elf
