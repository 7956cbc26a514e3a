#include "geotri/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "geotri/errors.hpp"

namespace geotri {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { for (int i = 0; i < n; i++) parent[i] = i; }
  int find(int a) { while (parent[a] != a) a = parent[a] = parent[parent[a]]; return a; }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double law_of_cosines_angle(double adj1, double adj2, double opp) {
  double c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2 * adj1 * adj2);
  c = std::min(1.0, std::max(-1.0, c));
  return std::acos(c);
}

} // namespace

IntrinsicMesh IntrinsicMesh::build(const MeshData& data, const Tolerances& tol) {
  IntrinsicMesh m;
  m.tol_ = tol;
  m.n_faces_ = static_cast<int>(data.faces.size());
  if (m.n_faces_ == 0) throw Disconnected("mesh has no faces");
  int nh = 3 * m.n_faces_;

  // Resolve per-halfedge lengths.
  m.length_.assign(nh, 0);
  for (int f = 0; f < m.n_faces_; f++) {
    for (int i = 0; i < 3; i++) {
      int h = 3 * f + i;
      double len = (h < static_cast<int>(data.halfedge_lengths.size())) ? data.halfedge_lengths[h] : 0;
      if (len <= 0) {
        int a = data.faces[f][i], b = data.faces[f][(i + 1) % 3];
        if (a < 0 || b < 0 || a >= static_cast<int>(data.positions.size()) ||
            b >= static_cast<int>(data.positions.size()))
          throw ParseError("halfedge length missing and no positions to derive it");
        const auto& pa = data.positions[a];
        const auto& pb = data.positions[b];
        len = std::sqrt((pa[0] - pb[0]) * (pa[0] - pb[0]) + (pa[1] - pb[1]) * (pa[1] - pb[1]) +
                        (pa[2] - pb[2]) * (pa[2] - pb[2]));
      }
      if (!(len > 0)) throw TriangleInequalityViolation("non-positive edge length");
      m.length_[h] = len;
    }
  }

  // Strict triangle inequality per face.
  for (int f = 0; f < m.n_faces_; f++) {
    double a = m.length_[3 * f], b = m.length_[3 * f + 1], c = m.length_[3 * f + 2];
    if (a + b <= c || b + c <= a || c + a <= b)
      throw TriangleInequalityViolation("face " + std::to_string(f));
  }

  // Twin map: explicit gluings, else label matching with orientation repair.
  m.twin_.assign(nh, -1);
  if (!data.gluings.empty()) {
    for (auto [h1, h2] : data.gluings) {
      if (h1 < 0 || h2 < 0 || h1 >= nh || h2 >= nh || h1 == h2)
        throw ParseError("bad gluing pair");
      if (m.twin_[h1] >= 0 || m.twin_[h2] >= 0) throw NonManifold("halfedge glued twice");
      if (std::abs(m.length_[h1] - m.length_[h2]) > 1e-9 * std::max(m.length_[h1], m.length_[h2]))
        throw NonManifold("glued sides have different lengths");
      m.twin_[h1] = h2;
      m.twin_[h2] = h1;
    }
  } else {
    std::map<std::pair<int, int>, std::vector<int>> by_pair;
    for (int f = 0; f < m.n_faces_; f++)
      for (int i = 0; i < 3; i++) {
        int a = data.faces[f][i], b = data.faces[f][(i + 1) % 3];
        if (a == b) throw NonManifold("degenerate face corner pair");
        by_pair[{std::min(a, b), std::max(a, b)}].push_back(3 * f + i);
      }
    for (auto& [key, hs] : by_pair) {
      if (hs.size() > 2) throw NonManifold("edge shared by more than two faces");
      if (hs.size() == 2) {
        int h1 = hs[0], h2 = hs[1];
        int a1 = data.faces[h1 / 3][h1 % 3];
        int a2 = data.faces[h2 / 3][h2 % 3];
        if (a1 == a2) throw NonManifold("inconsistent face orientations across an edge");
        if (std::abs(m.length_[h1] - m.length_[h2]) > 1e-9 * std::max(m.length_[h1], m.length_[h2]))
          throw NonManifold("glued sides have different lengths");
        m.twin_[h1] = h2;
        m.twin_[h2] = h1;
      }
    }
  }

  // Connectivity.
  {
    std::vector<int> seen(m.n_faces_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; i++) {
        int t = m.twin_[3 * f + i];
        if (t >= 0 && !seen[t / 3]) {
          seen[t / 3] = 1;
          count++;
          stack.push_back(t / 3);
        }
      }
    }
    if (count != m.n_faces_) throw Disconnected("mesh is not connected");
  }

  // Edge ids: canonical halfedge is the smaller of a twin pair.
  m.edge_of_he_.assign(nh, -1);
  for (int h = 0; h < nh; h++) {
    int t = m.twin_[h];
    if (t < 0 || h < t) {
      m.edge_of_he_[h] = static_cast<int>(m.edge_halfedge_.size());
      m.edge_halfedge_.push_back(h);
    }
  }
  for (int h = 0; h < nh; h++)
    if (m.edge_of_he_[h] < 0) m.edge_of_he_[h] = m.edge_of_he_[m.twin_[h]];

  // Vertex classes from corner gluing.
  {
    UnionFind uf(nh);  // corner slot = halfedge id of the outgoing side
    for (int h = 0; h < nh; h++) {
      int t = m.twin_[h];
      if (t >= 0) {
        uf.unite(h, he_next(t));        // tail(h) ~ head(t)
        uf.unite(he_next(h), t);        // head(h) ~ tail(t)
      }
    }
    std::map<int, int> remap;
    m.corner_vertex_.assign(nh, -1);
    for (int h = 0; h < nh; h++) {
      int root = uf.find(h);
      auto it = remap.find(root);
      if (it == remap.end()) it = remap.emplace(root, static_cast<int>(remap.size())).first;
      m.corner_vertex_[h] = it->second;
    }
    m.n_vertices_ = static_cast<int>(remap.size());
  }

  // Layouts, corner angles, areas.
  m.layout_.resize(m.n_faces_);
  m.corner_angle_.assign(nh, 0);
  m.face_area_.assign(m.n_faces_, 0);
  m.max_edge_ = 0;
  m.min_edge_ = 1e300;
  for (int f = 0; f < m.n_faces_; f++) {
    double l01 = m.length_[3 * f], l12 = m.length_[3 * f + 1], l20 = m.length_[3 * f + 2];
    Vec2 p0{0, 0}, p1{l01, 0};
    double x = (l01 * l01 + l20 * l20 - l12 * l12) / (2 * l01);
    double y2 = l20 * l20 - x * x;
    double y = std::sqrt(std::max(0.0, y2));
    if (!(y > 0)) throw TriangleInequalityViolation("degenerate layout for face " + std::to_string(f));
    m.layout_[f] = {p0, p1, Vec2{x, y}};
    m.corner_angle_[3 * f + 0] = law_of_cosines_angle(l01, l20, l12);
    m.corner_angle_[3 * f + 1] = law_of_cosines_angle(l01, l12, l20);
    m.corner_angle_[3 * f + 2] = law_of_cosines_angle(l12, l20, l01);
    m.face_area_[f] = 0.5 * l01 * y;
    m.total_area_ += m.face_area_[f];
    for (int i = 0; i < 3; i++) {
      m.max_edge_ = std::max(m.max_edge_, m.length_[3 * f + i]);
      m.min_edge_ = std::min(m.min_edge_, m.length_[3 * f + i]);
    }
  }

  // Vertex angles, boundary flags, CCW outgoing fans.
  m.vertex_boundary_.assign(m.n_vertices_, false);
  m.vertex_angle_.assign(m.n_vertices_, 0);
  m.vertex_out_.assign(m.n_vertices_, {});
  for (int h = 0; h < nh; h++) {
    int v = m.corner_vertex_[h];
    m.vertex_angle_[v] += m.corner_angle_[h];
    if (m.twin_[h] < 0) m.vertex_boundary_[v] = true;
    if (m.twin_[he_prev(h)] < 0) m.vertex_boundary_[v] = true;
  }
  {
    std::vector<int> start(m.n_vertices_, -1);
    std::vector<int> wedge_count(m.n_vertices_, 0);
    for (int h = 0; h < nh; h++) {
      int v = m.corner_vertex_[h];
      if (start[v] < 0) start[v] = h;
      // Boundary fans must start at the outgoing boundary-adjacent halfedge:
      // the one whose CW predecessor is missing.
      if (m.twin_[he_prev(h)] < 0) {
        start[v] = h;
        wedge_count[v]++;
      }
    }
    for (int v = 0; v < m.n_vertices_; v++)
      if (wedge_count[v] > 1) throw NonManifold("vertex with pinched boundary");
    for (int v = 0; v < m.n_vertices_; v++) {
      int h0 = start[v];
      if (h0 < 0) continue;
      int h = h0;
      int guard = 0;
      do {
        m.vertex_out_[v].push_back(h);
        int t = m.twin_[h];
        if (t < 0) break;  // boundary vertex: fan ends at the other boundary side
        h = he_next(t);    // CCW rotation
        if (++guard > nh) throw NonManifold("vertex fan does not close");
      } while (h != h0);
      if (m.vertex_out_[v].size() > 0 && !m.vertex_boundary_[v]) {
        // Interior fan must close.
        int last = m.vertex_out_[v].back();
        if (m.twin_[last] < 0 || he_next(m.twin_[last]) != h0)
          throw NonManifold("interior vertex fan does not close");
      }
    }
  }
  {
    size_t fanned = 0;
    for (int v = 0; v < m.n_vertices_; v++) fanned += m.vertex_out_[v].size();
    if (fanned != static_cast<size_t>(nh)) throw NonManifold("vertex link is disconnected");
  }
  for (int v = 0; v < m.n_vertices_; v++) {
    if (!(m.vertex_angle_[v] > 0)) throw NonManifold("zero angle at vertex");
    if (!m.vertex_boundary_[v])
      m.min_angle_around_ = std::min(m.min_angle_around_, m.vertex_angle_[v]);
  }

  // Boundary loops.
  {
    std::vector<bool> used(nh, false);
    for (int h = 0; h < nh; h++) {
      if (m.twin_[h] >= 0 || used[h]) continue;
      std::vector<int> loop;
      int cur = h;
      int guard = 0;
      do {
        used[cur] = true;
        loop.push_back(cur);
        // Rotate around the head of cur to the next boundary halfedge.
        int k = he_next(cur);
        while (m.twin_[k] >= 0) k = he_next(m.twin_[k]);
        cur = k;
        if (++guard > nh) throw NonManifold("boundary walk does not close");
      } while (cur != h);
      m.boundary_loops_.push_back(std::move(loop));
    }
  }

  return m;
}

std::string IntrinsicMesh::content_hash() const {
  std::string text;
  char buf[64];
  std::snprintf(buf, sizeof buf, "F %d\n", n_faces_);
  text += buf;
  for (int h = 0; h < halfedge_count(); h++) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", twin_[h], corner_vertex_[h], length_[h]);
    text += buf;
  }
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

std::string IntrinsicMesh::edge_table() const {
  std::ostringstream out;
  for (int e = 0; e < edge_count(); e++) {
    int h = edge_halfedge_[e];
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g\n", e, he_face(h), he_side(h), length_[h]);
    out << buf;
  }
  return out.str();
}

MeshData read_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  auto next_token_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      bool blank = true;
      for (char c : line)
        if (!isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) return true;
    }
    return false;
  };
  std::string line;
  if (!next_token_line(line)) throw ParseError("empty OFF file");
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "OFF") throw ParseError("missing OFF header");
  }
  if (!next_token_line(line)) throw ParseError("missing OFF counts");
  int nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nf >> ne)) throw ParseError("bad OFF counts");
  }
  MeshData data;
  data.positions.resize(nv);
  for (int v = 0; v < nv; v++) {
    if (!next_token_line(line)) throw ParseError("missing vertex line");
    std::istringstream ls(line);
    if (!(ls >> data.positions[v][0] >> data.positions[v][1] >> data.positions[v][2]))
      throw ParseError("bad vertex line");
  }
  data.faces.resize(nf);
  for (int f = 0; f < nf; f++) {
    if (!next_token_line(line)) throw ParseError("missing face line");
    std::istringstream ls(line);
    int k;
    if (!(ls >> k) || k != 3) throw ParseError("only triangle faces supported");
    if (!(ls >> data.faces[f][0] >> data.faces[f][1] >> data.faces[f][2]))
      throw ParseError("bad face line");
  }
  return data;
}

void apply_sidecar(MeshData& data, const IntrinsicMesh& reference, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  if (data.halfedge_lengths.empty()) {
    data.halfedge_lengths.assign(3 * data.faces.size(), 0);
    for (int h = 0; h < reference.halfedge_count(); h++)
      data.halfedge_lengths[h] = reference.he_length(h);
  }
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    int e;
    double len;
    if (!(ls >> e >> len)) continue;
    if (e < 0 || e >= reference.edge_count()) throw ParseError("sidecar edge id out of range");
    if (!(len > 0)) throw ParseError("sidecar length must be positive");
    int h = reference.edge_halfedge(e);
    data.halfedge_lengths[h] = len;
    if (reference.twin(h) >= 0) data.halfedge_lengths[reference.twin(h)] = len;
  }
}

void apply_identifications(MeshData& data, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "glue") throw ParseError("unknown identifications directive: " + tag);
    int fa, ia, fb, ib;
    if (!(ls >> fa >> ia >> fb >> ib)) throw ParseError("bad glue line");
    data.gluings.emplace_back(3 * fa + ia, 3 * fb + ib);
  }
}

IntrinsicMesh load_mesh(const std::string& off_path, const std::optional<std::string>& sidecar,
                        const std::optional<std::string>& identifications, const Tolerances& tol) {
  MeshData data = read_off(off_path);
  if (identifications) {
    apply_identifications(data, *identifications);
    // With explicit gluings, lengths must come from positions or sidecar;
    // positions first so the sidecar has a reference edge table.
    if (!data.positions.empty()) {
      data.halfedge_lengths.assign(3 * data.faces.size(), 0);
      for (size_t f = 0; f < data.faces.size(); f++)
        for (int i = 0; i < 3; i++) {
          int a = data.faces[f][i], b = data.faces[f][(i + 1) % 3];
          const auto& pa = data.positions[a];
          const auto& pb = data.positions[b];
          data.halfedge_lengths[3 * f + i] =
              std::sqrt((pa[0] - pb[0]) * (pa[0] - pb[0]) + (pa[1] - pb[1]) * (pa[1] - pb[1]) +
                        (pa[2] - pb[2]) * (pa[2] - pb[2]));
        }
    }
  }
  if (sidecar) {
    IntrinsicMesh reference = IntrinsicMesh::build(data, tol);
    apply_sidecar(data, reference, *sidecar);
  }
  return IntrinsicMesh::build(data, tol);
}

} // namespace geotri
