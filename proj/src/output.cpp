#include "gffv/output.hpp"

#include <array>
#include <cstdint>
#include <cstring>

namespace gffv {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.precision(17);
  return out;
}

void check_stream(const std::ostream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

DiagnosticsWriter::DiagnosticsWriter(const std::filesystem::path& path) : path_(path), out_(open_for_write(path)) {
  out_ << "t,dt,mass,entropy,dissipation,rho_min,rho_max\n";
  check_stream(out_, path_);
}

void DiagnosticsWriter::write(const DiagnosticsRecord& r) {
  out_ << r.t << ',' << r.dt << ',' << r.mass << ',' << r.entropy << ',' << r.dissipation << ',' << r.rho_min << ','
       << r.rho_max << '\n';
  check_stream(out_, path_);
}

void DiagnosticsWriter::flush() {
  out_.flush();
  check_stream(out_, path_);
}

template <int D>
void write_snapshot_csv(const Field<D>& field, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << (D == 1 ? "x,rho\n" : "x,y,rho\n");
  for (std::size_t c = 0; c < field.size(); ++c) {
    const Point<D> x = field.grid.center(c);
    for (int a = 0; a < D; ++a) out << x[a] << ',';
    out << field.values[c] << '\n';
  }
  check_stream(out, path);
}

template <int D>
void write_snapshot_binary(const Field<D>& field, const std::filesystem::path& path) {
  static_assert(sizeof(double) == 8);
  std::ofstream out = open_for_write(path, std::ios::binary);
  out.write("GFFV", 4);
  put_u32(out, D);
  put_u32(out, static_cast<std::uint32_t>(field.grid.axes[0].n));
  put_u32(out, D == 2 ? static_cast<std::uint32_t>(field.grid.axes[D - 1].n) : 1u);
  for (double v : field.values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b.data(), 8);
  }
  check_stream(out, path);
}

template <int D>
Field<D> read_snapshot_binary(const Grid<D>& grid, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (std::string(magic.data(), 4) != "GFFV") throw IoError("'" + path.string() + "' is not a snapshot dump");
  const std::uint32_t rank = get_u32(in);
  const std::uint32_t nx = get_u32(in);
  const std::uint32_t ny = get_u32(in);
  const std::uint32_t expect_ny = D == 2 ? static_cast<std::uint32_t>(grid.axes[D - 1].n) : 1u;
  if (rank != D || nx != static_cast<std::uint32_t>(grid.axes[0].n) || ny != expect_ny) {
    throw IoError("snapshot '" + path.string() + "' does not match the grid");
  }
  Field<D> field(grid);
  for (double& v : field.values) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    std::memcpy(&v, &bits, 8);
  }
  if (!in) throw IoError("snapshot '" + path.string() + "' is truncated");
  return field;
}

void write_json(const nlohmann::json& value, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << value.dump(2) << '\n';
  check_stream(out, path);
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

template void write_snapshot_csv(const Field<1>&, const std::filesystem::path&);
template void write_snapshot_csv(const Field<2>&, const std::filesystem::path&);
template void write_snapshot_binary(const Field<1>&, const std::filesystem::path&);
template void write_snapshot_binary(const Field<2>&, const std::filesystem::path&);
template Field<1> read_snapshot_binary(const Grid<1>&, const std::filesystem::path&);
template Field<2> read_snapshot_binary(const Grid<2>&, const std::filesystem::path&);

}  // namespace gffv
