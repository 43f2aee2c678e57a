#include "addbasis/version.hpp"

namespace addbasis {

const char* version() { return ADDBASIS_VERSION; }

}  // namespace addbasis
