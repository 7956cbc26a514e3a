#pragma once

#include <map>
#include <memory>
#include <optional>

#include "geotri/regions.hpp"
#include "geotri/steiner.hpp"

namespace geotri {

// Per-mesh caches shared across pipeline stages and checks.
class MeshContext {
public:
  explicit MeshContext(const IntrinsicMesh& m) : mesh_(&m) {}

  const IntrinsicMesh& mesh() const { return *mesh_; }

  SteinerGraph& graph(int n) { return *graph_ptr(n); }

  std::shared_ptr<SteinerGraph> graph_ptr(int n) {
    auto it = graphs_.find(n);
    if (it == graphs_.end())
      it = graphs_.emplace(n, std::make_shared<SteinerGraph>(*mesh_, n)).first;
    return it->second;
  }

  const MeshDiameter& diameter() {
    if (!diam_) diam_ = mesh_diameter_bounds(*mesh_);
    return *diam_;
  }

private:
  const IntrinsicMesh* mesh_;
  std::map<int, std::shared_ptr<SteinerGraph>> graphs_;
  std::optional<MeshDiameter> diam_;
};

} // namespace geotri
