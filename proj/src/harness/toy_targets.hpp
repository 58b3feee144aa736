#pragma once

#include <memory>

#include "harness/target.hpp"

namespace semfuzz::harness {

// Length-prefixed chunked binary format: magic "CHNK", then
// [type:4][len:4 LE][payload]. Planted crash on type "BUG!" with declared
// length > 64; planted hang on type "HNG!".
std::unique_ptr<TargetAdapter> make_chunkfmt_target();

// Recursive-descent parser over a JSON subset with a planted crash when the
// container nesting depth exceeds 48.
std::unique_ptr<TargetAdapter> make_minijson_target();

}  // namespace semfuzz::harness
