#pragma once

#include <string>

namespace icc {

// Source text of the standard prelude, embedded at build time.
const std::string& prelude_source();

}  // namespace icc
