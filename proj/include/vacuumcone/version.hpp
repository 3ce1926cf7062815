#pragma once

namespace vacuumcone {

extern const char* const kVersionString;

}  // namespace vacuumcone
