#include "moclab/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "moclab/errors.hpp"

namespace moclab {

Grid Grid::theta(std::size_t cells) {
  if (cells < 4) throw PreconditionError("theta grid needs at least 4 cells");
  Grid g;
  g.kind = GridKind::Theta1D;
  g.nx = cells;
  g.hx = std::numbers::pi / static_cast<double>(cells);
  return g;
}

Grid Grid::periodic(double length_x, std::size_t nx, double length_y, std::size_t ny) {
  if (nx < 4 || ny < 1 || (ny > 1 && ny < 4)) {
    throw PreconditionError("periodic grid needs at least 4 nodes per direction");
  }
  Grid g;
  g.kind = GridKind::Periodic;
  g.nx = nx;
  g.ny = ny;
  g.hx = length_x / static_cast<double>(nx);
  g.hy = ny > 1 ? length_y / static_cast<double>(ny) : 0.0;
  return g;
}

Grid Grid::domain(BoundaryFlavor flavor, double length_x, std::size_t nx, double length_y,
                  std::size_t ny) {
  if (nx < 4 || ny < 1 || (ny > 1 && ny < 4)) {
    throw PreconditionError("domain grid needs at least 4 nodes per direction");
  }
  if (flavor == BoundaryFlavor::None) throw PreconditionError("domain grid needs a boundary flavor");
  Grid g;
  g.kind = GridKind::Domain;
  g.flavor = flavor;
  g.nx = nx;
  g.ny = ny;
  const double cells_x = flavor == BoundaryFlavor::Neumann ? nx : nx - 1;
  const double cells_y = flavor == BoundaryFlavor::Neumann ? ny : ny - 1;
  g.hx = length_x / cells_x;
  g.hy = ny > 1 ? length_y / cells_y : 0.0;
  return g;
}

double Grid::x(std::size_t i) const {
  const double fi = static_cast<double>(i);
  switch (kind) {
    case GridKind::Theta1D:
      return (fi + 0.5) * hx;
    case GridKind::Periodic:
      return fi * hx;
    case GridKind::Domain:
      return flavor == BoundaryFlavor::Neumann ? (fi + 0.5) * hx : fi * hx;
  }
  return 0.0;
}

double Grid::y(std::size_t j) const {
  if (ny == 1) return 0.0;
  const double fj = static_cast<double>(j);
  if (kind == GridKind::Domain && flavor == BoundaryFlavor::Neumann) return (fj + 0.5) * hy;
  return fj * hy;
}

Point Grid::point(std::size_t node) const { return {x(node % nx), y(node / nx)}; }

bool Grid::on_boundary(std::size_t node) const {
  if (kind != GridKind::Domain || flavor != BoundaryFlavor::Dirichlet) return false;
  const std::size_t i = node % nx;
  const std::size_t j = node / nx;
  if (i == 0 || i + 1 == nx) return true;
  return ny > 1 && (j == 0 || j + 1 == ny);
}

Grid make_grid(const ManifoldModel& m, std::size_t nx, std::size_t ny) {
  if (ny == 0) ny = nx;
  const auto flavor = [&] {
    switch (m.boundary()) {
      case Boundary::NeumannDomain:
        return BoundaryFlavor::Neumann;
      case Boundary::DirichletDomain:
        return BoundaryFlavor::Dirichlet;
      case Boundary::Closed:
        break;
    }
    return BoundaryFlavor::None;
  }();
  const auto& shape = m.shape();
  if (const auto* c = std::get_if<Circle>(&shape)) return Grid::periodic(c->circumference, nx);
  if (const auto* t = std::get_if<FlatTorus>(&shape)) {
    return Grid::periodic(t->length_x, nx, t->length_y, ny);
  }
  if (std::holds_alternative<RoundSphere>(shape)) return Grid::theta(nx);
  if (const auto* i = std::get_if<Interval>(&shape)) return Grid::domain(flavor, i->length, nx);
  const auto& r = std::get<Rectangle>(shape);
  return Grid::domain(flavor, r.length_x, nx, r.length_y, ny);
}

Field Field::sample(const ManifoldModel& m, const Grid& g, const std::function<double(Point)>& f) {
  Field out{m, g, std::vector<double>(g.size()), 0.0, 1.0};
  for (std::size_t n = 0; n < g.size(); ++n) {
    out.values[n] = g.on_boundary(n) ? 0.0 : f(g.point(n));
  }
  return out;
}

void Field::validate() const {
  if (values.size() != grid.size()) {
    throw PreconditionError("field has " + std::to_string(values.size()) + " values for a grid of " +
                            std::to_string(grid.size()) + " nodes");
  }
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!std::isfinite(values[n])) throw PreconditionError("field value is not finite");
    if (grid.on_boundary(n) && values[n] != 0.0) {
      throw PreconditionError("Dirichlet field must vanish on the boundary");
    }
  }
  if (!(metric_scale > 0.0 && metric_scale <= 1.0)) {
    throw PreconditionError("metric scale must lie in (0, 1]");
  }
}

}  // namespace moclab
