#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cliff/balancing.hpp"
#include "cliff/ld_solution.hpp"
#include "cliff/torus.hpp"

namespace cliff {

enum class Region : uint8_t { Graph, Annulus, Bridge };
const char* region_name(Region r);

struct SurfaceMesh {
    std::vector<Vec4> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> rho_perm;
    std::vector<std::vector<int>> group_perms;  // one per generator
    std::vector<Region> region;
    std::vector<ChartPoint> chart;   // chart position of each vertex
    std::vector<int8_t> sheet;       // +1 top, -1 bottom, 0 on a bridge waist
    int expected_genus = 1;

    // Construction parameters, for reporting.
    int grid_cells = 0;
    int hole_half_cells = 0;
    int sectors = 0;
    int rings = 0;
    std::vector<double> gluing_radius;   // per bridge
    std::vector<double> catenoid_scale;  // per bridge: height = scale * arccosh(d / tau)
    std::vector<ChartPoint> bridge_centers;
};

// Doubled surface: graphs of +-phi over the torus, phi = sum_i tau_i Phi_i, joined by catenoidal
// bridges at the singular points. mesh_density is the target number of grid cells per chart side.
SurfaceMesh build_initial_surface(const DoublingConfig& cfg, const std::vector<const LDSolution*>& lds,
                                  const BalanceReport& report, int mesh_density);

// Single-sheet mesh of the flat torus on an n x n chart grid.
SurfaceMesh build_bare_torus(int n);

int euler_characteristic(const SurfaceMesh& mesh);
// Every edge in exactly two triangles, traversed in opposite directions.
bool is_closed_oriented_manifold(const SurfaceMesh& mesh);
double min_angle_degrees(const SurfaceMesh& mesh);

double discrete_area(const SurfaceMesh& mesh);
// Length of the S^3-tangential part of the cotangent mean-curvature vector per vertex.
std::vector<double> discrete_mean_curvature(const SurfaceMesh& mesh);

void write_obj(const SurfaceMesh& mesh, const std::string& path);
void write_csv4d(const SurfaceMesh& mesh, const std::string& path);

}  // namespace cliff
