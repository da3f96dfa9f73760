// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/csv.hpp"

#include <fstream>
#include <iomanip>
#include <system_error>

#include "gossip_loc/error.hpp"

namespace gossip_loc {

void write_matrix_csv(std::ostream& os, const MatrixXd& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c);
    }
    os << '\n';
  }
}

void write_vector_csv(std::ostream& os, const VectorXd& v) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << v(i) << '\n';
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::IoError, "cannot open " + tmp.string() + " for writing");
    try {
      writer(os);
    } catch (...) {
      os.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw;
    }
    os.flush();
    if (!os) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(Errc::IoError, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot move " + tmp.string() + " into place");
  }
}

}  // namespace gossip_loc
