#pragma once

namespace addbasis {

// Library version, "major.minor.patch".
const char* version();

}  // namespace addbasis
