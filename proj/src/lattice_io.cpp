#include "courant/lattice_io.hpp"

#include <cstdio>
#include <sstream>

#include "courant/error.hpp"

namespace courant {

namespace {

void append_row(std::string& out, const Eigen::MatrixXd& m, int row) {
  char buf[40];
  for (int c = 0; c < m.cols(); ++c) {
    std::snprintf(buf, sizeof buf, " %.17g", m(row, c));
    out += buf;
  }
}

std::string header(const char* kind, int n, int N) {
  return "lattice kind=" + std::string(kind) + " n=" + std::to_string(n) + " N=" + std::to_string(N) + "\n";
}

std::string dump_path(const PathLattice& p, const char* kind) {
  p.validate();
  std::string out = header(kind, p.dim(), p.N());
  out += "# k point[n] covector[n]\n";
  for (int k = 0; k <= p.N(); ++k) {
    out += std::to_string(k);
    append_row(out, p.point, k);
    append_row(out, p.covector, k);
    out += "\n";
  }
  return out;
}

std::string dump_triangle(const TriangleLattice& t, const char* kind) {
  t.validate();
  std::string out = header(kind, t.dim(), t.N);
  out += "# i j point[n] slot1[n] slot2[n]\n";
  for (int j = 0; j <= t.N; ++j) {
    for (int i = 0; i + j <= t.N; ++i) {
      const int node = lattice_index(t.N, i, j);
      out += std::to_string(i) + " " + std::to_string(j);
      append_row(out, t.point, node);
      append_row(out, t.slot1, node);
      append_row(out, t.slot2, node);
      out += "\n";
    }
  }
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& why) {
  fail(ErrorCode::parse, "lattice line " + std::to_string(line) + ": " + why);
}

int header_field(const std::string& token, const std::string& key, int line) {
  if (token.rfind(key + "=", 0) != 0) parse_fail(line, "expected " + key + "=");
  try {
    std::size_t used = 0;
    int v = std::stoi(token.substr(key.size() + 1), &used);
    if (used != token.size() - key.size() - 1) parse_fail(line, "bad integer in " + token);
    return v;
  } catch (const std::logic_error&) {
    parse_fail(line, "bad integer in " + token);
  }
}

void read_values(std::istringstream& in, Eigen::MatrixXd& m, int row, int line) {
  for (int c = 0; c < m.cols(); ++c) {
    std::string tok;
    if (!(in >> tok)) parse_fail(line, "record too short");
    try {
      std::size_t used = 0;
      m(row, c) = std::stod(tok, &used);
      if (used != tok.size()) parse_fail(line, "bad number " + tok);
    } catch (const std::logic_error&) {
      parse_fail(line, "bad number " + tok);
    }
  }
}

}  // namespace

std::string dump_lattice(const DiscretePath& p) { return dump_path(p, "path"); }
std::string dump_lattice(const TangentPath& p) { return dump_path(p, "tangent_path"); }
std::string dump_lattice(const DiscreteTriangle& t) { return dump_triangle(t, "triangle"); }
std::string dump_lattice(const TangentTriangle& t) { return dump_triangle(t, "tangent_triangle"); }

AnyLattice parse_lattice(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  int lineno = 1;
  if (!std::getline(lines, line)) parse_fail(lineno, "empty input");
  std::istringstream head(line);
  std::string magic, kind_tok, n_tok, N_tok, extra;
  head >> magic >> kind_tok >> n_tok >> N_tok;
  if (magic != "lattice" || kind_tok.rfind("kind=", 0) != 0) parse_fail(lineno, "bad header");
  if (head >> extra) parse_fail(lineno, "trailing header fields");
  const std::string kind = kind_tok.substr(5);
  const int n = header_field(n_tok, "n", lineno);
  const int N = header_field(N_tok, "N", lineno);
  if (n < 1 || N < 1) parse_fail(lineno, "n and N must be positive");

  const bool tri = kind == "triangle" || kind == "tangent_triangle";
  if (!tri && kind != "path" && kind != "tangent_path") parse_fail(lineno, "unknown kind " + kind);
  const int rows = tri ? lattice_size(N) : N + 1;
  Eigen::MatrixXd point(rows, n), a(rows, n), b(rows, n);

  int record = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (record >= rows) parse_fail(lineno, "more records than nodes");
    std::istringstream in(line);
    int node = 0;
    if (tri) {
      int i = -1, j = -1;
      if (!(in >> i >> j)) parse_fail(lineno, "missing node indices");
      if (i < 0 || j < 0 || i + j > N || lattice_index(N, i, j) != record)
        parse_fail(lineno, "node out of storage order");
      node = record;
    } else {
      int k = -1;
      if (!(in >> k) || k != record) parse_fail(lineno, "node out of order");
      node = k;
    }
    read_values(in, point, node, lineno);
    read_values(in, a, node, lineno);
    if (tri) read_values(in, b, node, lineno);
    if (in >> extra) parse_fail(lineno, "record too long");
    ++record;
  }
  if (record != rows) parse_fail(lineno, "expected " + std::to_string(rows) + " records");

  auto fill_path = [&](auto p) {
    p.point = point;
    p.covector = a;
    return p;
  };
  auto fill_tri = [&](auto t) {
    t.N = N;
    t.point = point;
    t.slot1 = a;
    t.slot2 = b;
    return t;
  };
  if (kind == "path") return fill_path(DiscretePath{});
  if (kind == "tangent_path") return fill_path(TangentPath{});
  if (kind == "triangle") return fill_tri(DiscreteTriangle{});
  return fill_tri(TangentTriangle{});
}

}  // namespace courant
