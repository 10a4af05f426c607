#include "cavityflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cavityflow {

namespace {

std::pair<int, int> edge_key(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// unique edges -> incident triangle count
std::map<std::pair<int, int>, int> edge_census(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> census;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) census[edge_key(t[e], t[(e + 1) % 3])]++;
  return census;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double Mesh::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d d1 = vertices[tri[1]] - vertices[tri[0]];
  const Eigen::Vector2d d2 = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < num_triangles(); ++t) area += signed_area(t);
  return area;
}

void Mesh::validate() const {
  const int nv = num_vertices();
  for (int t = 0; t < num_triangles(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= nv) throw std::logic_error("mesh: triangle vertex index out of range");
    if (signed_area(t) <= 0.0) throw std::logic_error("mesh: non-positive triangle area");
  }
  for (const auto& be : boundary_edges) {
    if (be.a < 0 || be.a >= nv || be.b < 0 || be.b >= nv)
      throw std::logic_error("mesh: boundary edge vertex index out of range");
  }

  auto census = edge_census(*this);
  std::map<std::pair<int, int>, int> tagged;
  for (const auto& be : boundary_edges) {
    auto key = edge_key(be.a, be.b);
    if (!tagged.emplace(key, be.tag).second)
      throw std::logic_error("mesh: duplicate boundary edge");
    auto it = census.find(key);
    if (it == census.end() || it->second != 1)
      throw std::logic_error("mesh: boundary edge is not a 1-triangle edge");
  }
  for (const auto& [key, count] : census) {
    if (count > 2) throw std::logic_error("mesh: edge shared by more than 2 triangles");
    if (count == 1 && tagged.find(key) == tagged.end())
      throw std::logic_error("mesh: untagged boundary edge");
  }
}

Mesh unit_square_mesh(int m) {
  if (m < 1) throw std::invalid_argument("unit_square_mesh: m must be >= 1");
  Mesh mesh;
  const int n = m + 1;
  mesh.vertices.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.vertices.emplace_back(static_cast<double>(i) / m, static_cast<double>(j) / m);

  auto vid = [n](int i, int j) { return j * n + i; };
  mesh.triangles.reserve(static_cast<size_t>(2) * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  for (int i = 0; i < m; ++i)
    mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), kWallTag});
  for (int j = 0; j < m; ++j)
    mesh.boundary_edges.push_back({vid(m, j), vid(m, j + 1), kWallTag});
  for (int i = 0; i < m; ++i)
    mesh.boundary_edges.push_back({vid(i, m), vid(i + 1, m), kLidTag});
  for (int j = 0; j < m; ++j)
    mesh.boundary_edges.push_back({vid(0, j), vid(0, j + 1), kWallTag});
  return mesh;
}

Mesh semi_ellipse_mesh(int m) {
  if (m < 2) throw std::invalid_argument("semi_ellipse_mesh: m must be >= 2");
  const int ns = 2 * m + 1;  // parameter nodes along s in [-1,1]
  const int nt = m + 1;      // along t in [0,1]

  // map parameter nodes, merging coincident images (the s=+-1 columns)
  std::vector<Eigen::Vector2d> verts;
  std::vector<int> node_of(static_cast<size_t>(ns) * nt, -1);
  std::map<std::pair<double, double>, int> seen;
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < ns; ++i) {
      const double s = -1.0 + static_cast<double>(i) / m;
      const double t = static_cast<double>(j) / m;
      double x1 = s;
      double x2 = -0.5 * t * std::sqrt(std::max(0.0, 1.0 - s * s));
      if (x2 == 0.0) x2 = 0.0;  // normalize -0
      auto [it, inserted] = seen.emplace(std::make_pair(x1, x2), static_cast<int>(verts.size()));
      if (inserted) verts.emplace_back(x1, x2);
      node_of[static_cast<size_t>(j) * ns + i] = it->second;
    }
  }

  Mesh mesh;
  mesh.vertices = std::move(verts);
  auto vid = [&](int i, int j) { return node_of[static_cast<size_t>(j) * ns + i]; };

  const double area_floor = 1e-14;  // bbox area is 1 (2 x 0.5)
  auto push_tri = [&](int a, int b, int c) {
    if (a == b || b == c || a == c) return;
    const Eigen::Vector2d d1 = mesh.vertices[b] - mesh.vertices[a];
    const Eigen::Vector2d d2 = mesh.vertices[c] - mesh.vertices[a];
    const double area2 = d1.x() * d2.y() - d1.y() * d2.x();
    if (std::abs(area2) * 0.5 < area_floor) return;
    if (area2 > 0.0)
      mesh.triangles.push_back({a, b, c});
    else
      mesh.triangles.push_back({a, c, b});
  };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < 2 * m; ++i) {
      push_tri(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
      push_tri(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
    }
  }

  auto census = edge_census(mesh);
  for (const auto& [key, count] : census) {
    if (count != 1) continue;
    const bool on_lid = std::abs(mesh.vertices[key.first].y()) < 1e-12 &&
                        std::abs(mesh.vertices[key.second].y()) < 1e-12;
    mesh.boundary_edges.push_back({key.first, key.second, on_lid ? kLidTag : kWallTag});
  }
  return mesh;
}

MshParseError::MshParseError(int line, const std::string& what)
    : std::runtime_error("msh parse error at line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

struct LineReader {
  std::istream& in;
  int lineno = 0;
  bool next(std::string& out) {
    if (!std::getline(in, out)) return false;
    ++lineno;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return true;
  }
  std::string expect(const char* what) {
    std::string s;
    if (!next(s)) throw MshParseError(lineno + 1, std::string("unexpected end of file, expected ") + what);
    return s;
  }
};

}  // namespace

Mesh read_msh(std::istream& in) {
  LineReader rd{in};

  std::vector<Eigen::Vector2d> nodes;
  std::map<long long, int> node_index;  // msh id -> dense index
  struct RawLine {
    int a, b, tag;
    bool tagged;
  };
  std::vector<RawLine> raw_lines;
  std::vector<std::array<int, 3>> raw_tris;
  std::vector<int> tri_lineno;

  bool saw_format = false, saw_nodes = false, saw_elements = false;

  auto lookup_node = [&](long long id, int lineno) {
    auto it = node_index.find(id);
    if (it == node_index.end())
      throw MshParseError(lineno, "reference to unknown node " + std::to_string(id));
    return it->second;
  };

  std::string line;
  while (rd.next(line)) {
    if (line == "$MeshFormat") {
      const int header_line = rd.lineno + 1;
      std::istringstream fs(rd.expect("format line"));
      std::string version;
      int file_type = -1, data_size = 0;
      if (!(fs >> version >> file_type >> data_size))
        throw MshParseError(header_line, "malformed $MeshFormat line");
      if (version != "2.2") throw MshParseError(header_line, "unsupported MSH version " + version);
      if (file_type != 0) throw MshParseError(header_line, "only ASCII files are supported");
      if (rd.expect("$EndMeshFormat") != "$EndMeshFormat")
        throw MshParseError(rd.lineno, "missing $EndMeshFormat");
      saw_format = true;
    } else if (line == "$Nodes") {
      if (!saw_format) throw MshParseError(rd.lineno, "$Nodes before $MeshFormat");
      const int count_line = rd.lineno + 1;
      long long count = -1;
      if (!(std::istringstream(rd.expect("node count")) >> count) || count < 0)
        throw MshParseError(count_line, "malformed node count");
      nodes.reserve(static_cast<size_t>(count));
      for (long long k = 0; k < count; ++k) {
        std::istringstream ns(rd.expect("node line"));
        long long id;
        double x, y, z;
        if (!(ns >> id >> x >> y >> z)) throw MshParseError(rd.lineno, "malformed node line");
        if (std::abs(z) > 1e-12)
          throw MshParseError(rd.lineno, "non-2D node (x3 != 0)");
        if (!node_index.emplace(id, static_cast<int>(nodes.size())).second)
          throw MshParseError(rd.lineno, "duplicate node id " + std::to_string(id));
        nodes.emplace_back(x, y);
      }
      if (rd.expect("$EndNodes") != "$EndNodes")
        throw MshParseError(rd.lineno, "missing $EndNodes");
      saw_nodes = true;
    } else if (line == "$Elements") {
      if (!saw_nodes) throw MshParseError(rd.lineno, "$Elements before $Nodes");
      const int count_line = rd.lineno + 1;
      long long count = -1;
      if (!(std::istringstream(rd.expect("element count")) >> count) || count < 0)
        throw MshParseError(count_line, "malformed element count");
      for (long long k = 0; k < count; ++k) {
        std::istringstream es(rd.expect("element line"));
        long long id;
        int type = 0, ntags = 0;
        if (!(es >> id >> type >> ntags) || ntags < 0)
          throw MshParseError(rd.lineno, "malformed element line");
        std::vector<long long> tags(ntags);
        for (int i = 0; i < ntags; ++i)
          if (!(es >> tags[i])) throw MshParseError(rd.lineno, "malformed element tags");
        if (type == 1) {
          long long a, b;
          if (!(es >> a >> b)) throw MshParseError(rd.lineno, "malformed 2-node line element");
          raw_lines.push_back({lookup_node(a, rd.lineno), lookup_node(b, rd.lineno),
                               ntags > 0 ? static_cast<int>(tags[0]) : kWallTag, ntags > 0});
        } else if (type == 2) {
          long long a, b, c;
          if (!(es >> a >> b >> c)) throw MshParseError(rd.lineno, "malformed triangle element");
          raw_tris.push_back({lookup_node(a, rd.lineno), lookup_node(b, rd.lineno),
                              lookup_node(c, rd.lineno)});
          tri_lineno.push_back(rd.lineno);
        }
        // other element types (points, quads, ...) are skipped
      }
      if (rd.expect("$EndElements") != "$EndElements")
        throw MshParseError(rd.lineno, "missing $EndElements");
      saw_elements = true;
    }
    // unrecognized sections are skipped line by line until their terminator
    else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      const std::string terminator = "$End" + line.substr(1);
      std::string s;
      while (rd.next(s))
        if (s == terminator) break;
    }
  }

  if (!saw_format) throw MshParseError(rd.lineno, "missing $MeshFormat section");
  if (!saw_nodes) throw MshParseError(rd.lineno, "missing $Nodes section");
  if (!saw_elements) throw MshParseError(rd.lineno, "missing $Elements section");

  Mesh mesh;
  mesh.vertices = std::move(nodes);
  mesh.triangles.reserve(raw_tris.size());
  for (size_t t = 0; t < raw_tris.size(); ++t) {
    auto tri = raw_tris[t];
    const Eigen::Vector2d d1 = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    const Eigen::Vector2d d2 = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    const double area2 = d1.x() * d2.y() - d1.y() * d2.x();
    if (area2 == 0.0) throw MshParseError(tri_lineno[t], "degenerate (zero-area) triangle");
    if (area2 < 0.0) std::swap(tri[1], tri[2]);
    mesh.triangles.push_back(tri);
  }

  std::map<std::pair<int, int>, int> line_tags;
  bool any_tagged = false;
  for (const auto& rl : raw_lines) {
    if (rl.tagged) {
      line_tags[edge_key(rl.a, rl.b)] = rl.tag;
      any_tagged = true;
    }
  }

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& v : mesh.vertices) top = std::max(top, v.y());

  auto census = edge_census(mesh);
  for (const auto& [key, count] : census) {
    if (count != 1) continue;
    int tag = kWallTag;
    if (any_tagged) {
      auto it = line_tags.find(key);
      if (it != line_tags.end()) tag = it->second;
    } else {
      // no physical tags in the file: classify the topmost horizontal
      // line as the lid
      const bool on_lid = std::abs(mesh.vertices[key.first].y() - top) < 1e-9 &&
                          std::abs(mesh.vertices[key.second].y() - top) < 1e-9;
      tag = on_lid ? kLidTag : kWallTag;
    }
    mesh.boundary_edges.push_back({key.first, key.second, tag});
  }
  return mesh;
}

Mesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_msh(in);
}

void write_msh(const Mesh& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.num_vertices() << "\n";
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    out << (i + 1) << ' ' << fmt_g17(mesh.vertices[i].x()) << ' '
        << fmt_g17(mesh.vertices[i].y()) << " 0\n";
  }
  out << "$EndNodes\n";
  out << "$Elements\n" << (mesh.boundary_edges.size() + mesh.triangles.size()) << "\n";
  long long eid = 1;
  for (const auto& be : mesh.boundary_edges)
    out << eid++ << " 1 2 " << be.tag << ' ' << be.tag << ' ' << (be.a + 1) << ' '
        << (be.b + 1) << "\n";
  for (const auto& t : mesh.triangles)
    out << eid++ << " 2 2 0 0 " << (t[0] + 1) << ' ' << (t[1] + 1) << ' ' << (t[2] + 1) << "\n";
  out << "$EndElements\n";
}

void write_msh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_msh(mesh, out);
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace cavityflow
