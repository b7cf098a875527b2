#include "cgfl/checkpoint.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace cgfl {

namespace {
constexpr const char* kHeader = "cgfl-ckpt-v1";
}

void save_checkpoint(const std::string& path, const NamedParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << kHeader << "\n" << params.size() << "\n";
  out << std::setprecision(17);
  for (const auto& [name, t] : params) {
    out << name << " " << t.rows() << " " << t.cols() << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      out << t.data()[i] << (i + 1 == t.size() ? '\n' : ' ');
    }
    if (t.size() == 0) out << "\n";
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

NamedParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string header;
  if (!(in >> header) || header != kHeader) {
    throw std::runtime_error("load_checkpoint: bad header in " + path +
                             " (expected " + std::string(kHeader) + ")");
  }
  std::size_t count = 0;
  if (!(in >> count)) throw std::runtime_error("load_checkpoint: missing tensor count");
  NamedParams params;
  params.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::string name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols)) {
      throw std::runtime_error("load_checkpoint: truncated tensor header");
    }
    Tensor t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(in >> t.data()[i])) {
        throw std::runtime_error("load_checkpoint: truncated values for " + name);
      }
    }
    params.emplace_back(name, t);
  }
  return params;
}

}  // namespace cgfl
