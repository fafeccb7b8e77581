#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gffv/diagnostics.hpp"

namespace gffv {

/// Appends one row per record to `diagnostics.csv`.
class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const std::filesystem::path& path);
  void write(const DiagnosticsRecord& record);
  void flush();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// One row per cell: "x,rho" in 1D and "x,y,rho" in 2D.
template <int D>
void write_snapshot_csv(const Field<D>& field, const std::filesystem::path& path);

/// Little-endian dump: "GFFV", u32 rank, u32 dims[2], then float64 values.
template <int D>
void write_snapshot_binary(const Field<D>& field, const std::filesystem::path& path);

template <int D>
Field<D> read_snapshot_binary(const Grid<D>& grid, const std::filesystem::path& path);

void write_json(const nlohmann::json& value, const std::filesystem::path& path);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace gffv
