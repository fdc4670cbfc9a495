#include "cloak/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "cloak/errors.hpp"

namespace cloak {

namespace {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

nlohmann::json axis_json(const Axis& a) {
  return {{"faces", a.faces}, {"pml_lo", a.pml_lo}, {"pml_hi", a.pml_hi}, {"lo", a.lo}, {"hi", a.hi}};
}

}  // namespace

void write_field(const std::string& path, const DiscreteField& f) {
  if (!f.grid) throw InvalidInput("field without grid");
  const Grid& g = *f.grid;
  nlohmann::json h = {{"format", "cfld"},
                      {"version", 1},
                      {"kind", to_string(f.kind)},
                      {"k", f.k},
                      {"nx", g.nx()},
                      {"ny", g.ny()},
                      {"order", "row-major, x fastest"},
                      {"coarse_h", g.coarse()},
                      {"pml", {{"cells", g.pml().cells}, {"order", g.pml().order}, {"r0", g.pml().r0}}},
                      {"x", axis_json(g.x())},
                      {"y", axis_json(g.y())}};
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path + " for writing");
  os << h.dump() << '\n';
  for (long a = 0; a < g.size(); ++a) {
    double re = f.values(a).real(), im = f.values(a).imag();
    os.write(reinterpret_cast<const char*>(&re), 8);
    os.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!os) throw InvalidInput("write failed for " + path);
}

DiscreteField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open " + path);
  std::string line;
  std::getline(is, line);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": bad header: " + e.what());
  }
  if (h.value("format", "") != "cfld") throw InvalidInput(path + ": not a field dump");
  GridSpec spec;
  auto xf = h["x"]["faces"].get<std::vector<double>>();
  auto yf = h["y"]["faces"].get<std::vector<double>>();
  spec.lo = vec2(h["x"]["lo"].get<double>(), h["y"]["lo"].get<double>());
  spec.hi = vec2(h["x"]["hi"].get<double>(), h["y"]["hi"].get<double>());
  spec.h = h["coarse_h"].get<double>();
  spec.pml.cells = h["pml"]["cells"].get<int>();
  spec.pml.order = h["pml"]["order"].get<int>();
  spec.pml.r0 = h["pml"]["r0"].get<double>();
  // Rebuild with every stored face as a breakpoint so the axes match exactly.
  spec.x_breaks.assign(xf.begin() + spec.pml.cells, xf.end() - spec.pml.cells);
  spec.y_breaks.assign(yf.begin() + spec.pml.cells, yf.end() - spec.pml.cells);
  auto grid = std::make_shared<Grid>(spec);
  if (grid->nx() != h["nx"].get<int>() || grid->ny() != h["ny"].get<int>())
    throw InvalidInput(path + ": grid could not be reconstructed");
  DiscreteField f;
  f.grid = grid;
  f.k = h["k"].get<double>();
  const std::string kind = h["kind"].get<std::string>();
  f.kind = kind == "total" ? FieldKind::Total : kind == "incident" ? FieldKind::Incident : FieldKind::Scattered;
  f.values.resize(grid->size());
  for (long a = 0; a < grid->size(); ++a) {
    double re, im;
    is.read(reinterpret_cast<char*>(&re), 8);
    is.read(reinterpret_cast<char*>(&im), 8);
    if (!is) throw InvalidInput(path + ": truncated data");
    f.values(a) = Complex(re, im);
  }
  return f;
}

}  // namespace cloak
