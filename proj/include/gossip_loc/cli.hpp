// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace gossip_loc {

/// Exit codes: 0 success, 1 runtime error, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gossip_loc
