// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <ostream>

#include "gossip_loc/types.hpp"

namespace gossip_loc {

/// Row per line, comma-separated, 17 significant digits.
void write_matrix_csv(std::ostream& os, const MatrixXd& m);

/// One entry per line.
void write_vector_csv(std::ostream& os, const VectorXd& v);

/// Writes through a sibling temporary file and renames it into place, so a
/// failed writer never leaves a partial artifact behind. Throws IoError.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace gossip_loc
