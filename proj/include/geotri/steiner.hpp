#pragma once

#include <vector>

#include "geotri/curve.hpp"

namespace geotri {

// Dijkstra graph over mesh vertices plus Steiner points on edges, with
// complete connections inside each face. Refinement is dyadic so that
// coarser graphs are sub-graphs of finer ones and distances are monotone.
class SteinerGraph {
public:
  // Smallest dyadic grid with at least n interior nodes per edge.
  SteinerGraph(const IntrinsicMesh& m, int n);

  const IntrinsicMesh& mesh() const { return *mesh_; }
  int per_edge() const { return per_edge_; }
  double spacing() const { return spacing_; }
  int node_count() const { return n_nodes_; }

  struct PathResult {
    double length = 0;
    SurfaceCurve curve;
    double err_bound = 0;
  };
  PathResult shortest(const SurfacePoint& a, const SurfacePoint& b) const;

  // Distances from a set of source points to every graph node.
  std::vector<double> distance_field(const std::vector<SurfacePoint>& sources) const;
  // Lower bound helper: min field value over the nodes of a face.
  double field_at(const std::vector<double>& field, const SurfacePoint& p) const;

  SurfacePoint node_point(int id) const;

private:
  struct Incidence {
    int face;
    Vec2 pos;
    int slot = -1;  // corner slot for vertex nodes
  };
  struct FaceNode {
    int node;
    Vec2 pos;
    int slot = -1;
  };
  const IntrinsicMesh* mesh_ = nullptr;
  int per_edge_ = 0;
  double spacing_ = 0;
  int n_nodes_ = 0;
  std::vector<std::vector<FaceNode>> face_nodes_;  // per face
  std::vector<std::vector<Incidence>> incid_;      // per node

  std::vector<Incidence> point_incidences(const SurfacePoint& p) const;
  void run_dijkstra(const std::vector<std::pair<int, double>>& seeds,
                    std::vector<double>& dist, std::vector<int>& parent,
                    std::vector<int>& parent_face) const;
};

} // namespace geotri
