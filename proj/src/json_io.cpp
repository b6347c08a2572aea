#include "mutheta/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace mutheta {

json fq2_to_json(const Fq2& x) { return json::array({x.a(), x.b()}); }

Fq2 fq2_from_json(const json& j, i64 p) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("bad field element");
  return Fq2(p, j[0].get<i64>(), j[1].get<i64>());
}

json witt_to_json(const WittElem& x) { return json::array({x.a(), x.b()}); }

WittElem witt_from_json(const json& j, i64 p, i64 s) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("bad ring element");
  return WittElem(p, s, j[0].get<i64>(), j[1].get<i64>());
}

json sqz_to_json(const SqzElem& x) {
  json lin = json::object();
  const auto& params = x.ctx()->params;
  for (size_t i = 0; i < params.size(); ++i)
    if (!x.linear_part()[i].is_zero()) lin[params[i]] = fq2_to_json(x.linear_part()[i]);
  return json{{"c", fq2_to_json(x.constant_term())}, {"lin", lin}};
}

json twisted_map_to_json(const TwistedMap<Fq2>& t) {
  json entries = json::array();
  for (int i = 0; i < t.mat.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < t.mat.cols(); ++j) row.push_back(fq2_to_json(t.mat(i, j)));
    entries.push_back(row);
  }
  return json{{"twist", t.twist},
              {"rows", t.mat.rows()},
              {"cols", t.mat.cols()},
              {"entries", entries}};
}

TwistedMap<Fq2> twisted_map_from_json(const json& j, i64 p) {
  int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  Matrix<Fq2> m = Matrix<Fq2>::zeros(rows, cols, Fq2::from_int(p, 0));
  const json& e = j.at("entries");
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = fq2_from_json(e.at(i).at(c), p);
  return TwistedMap<Fq2>(m, j.at("twist").get<int>());
}

namespace {

json sparse_matrix_to_json(const Matrix<Fq2>& m) {
  json out = json::object();
  for (int j = 0; j < m.cols(); ++j) {
    json col = json::object();
    for (int i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) col[std::to_string(i)] = fq2_to_json(m(i, j));
    if (!col.empty()) out[std::to_string(j)] = col;
  }
  return out;
}

Matrix<Fq2> sparse_matrix_from_json(const json& j, int n, i64 p) {
  Matrix<Fq2> m = Matrix<Fq2>::zeros(n, n, Fq2::from_int(p, 0));
  for (auto it = j.begin(); it != j.end(); ++it) {
    int col = std::stoi(it.key());
    for (auto rt = it.value().begin(); rt != it.value().end(); ++rt)
      m(std::stoi(rt.key()), col) = fq2_from_json(rt.value(), p);
  }
  return m;
}

}  // namespace

json space_to_json(const DieudonneSpace& d) {
  json basis = json::array();
  for (const auto& b : d.basis())
    basis.push_back(json{{"name", b.name}, {"type", to_string(b.type)}});
  return json{{"p", d.p()},
              {"basis", basis},
              {"F", sparse_matrix_to_json(d.F().mat)},
              {"V", sparse_matrix_to_json(d.V().mat)},
              {"pairing", sparse_matrix_to_json(d.pairing())}};
}

DieudonneSpace space_from_json(const json& j) {
  i64 p = j.at("p").get<i64>();
  std::vector<BasisVec> basis;
  for (const auto& b : j.at("basis")) {
    std::string t = b.at("type").get<std::string>();
    if (t != "Sigma" && t != "SigmaBar")
      throw std::invalid_argument("space_from_json: bad basis type");
    basis.push_back({b.at("name").get<std::string>(),
                     t == "Sigma" ? BasisType::Sigma : BasisType::SigmaBar});
  }
  int n = static_cast<int>(basis.size());
  Matrix<Fq2> F = sparse_matrix_from_json(j.at("F"), n, p);
  Matrix<Fq2> V = sparse_matrix_from_json(j.at("V"), n, p);
  Matrix<Fq2> P = sparse_matrix_from_json(j.at("pairing"), n, p);
  return DieudonneSpace(p, basis, TwistedMap<Fq2>(F, 1), TwistedMap<Fq2>(V, 1), P);
}

namespace {

json weight_to_json(const ThetaWeightTag& w) {
  json a = json::array(), b = json::array(), c = json::array();
  for (i64 e : w.base.a.entries) a.push_back(e);
  for (i64 e : w.base.b.entries) b.push_back(e);
  for (i64 e : w.base.c.entries) c.push_back(e);
  return json{{"a", a}, {"b", b}, {"c", c}, {"theta", w.theta_applications}};
}

ThetaWeightTag weight_from_json(const json& j) {
  auto vec = [](const json& arr) {
    std::vector<i64> v;
    for (const auto& e : arr) v.push_back(e.get<i64>());
    return v;
  };
  ThetaWeightTag t;
  t.base = WeightTriple{DominantWeight(vec(j.at("a"))), DominantWeight(vec(j.at("b"))),
                        DominantWeight(vec(j.at("c")))};
  t.theta_applications = j.at("theta").get<int>();
  return t;
}

}  // namespace

json fj_to_json(const FJExpansion& f) {
  json terms = json::object();
  for (const auto& [h, a] : f.terms) {
    json coeff = json::array();
    for (const auto& c : a) coeff.push_back(witt_to_json(c));
    terms[h.key()] = coeff;
  }
  json out{{"p", f.p}, {"s", f.s},     {"m", f.m},
           {"trunc", f.trunc}, {"rank", f.coeff_rank}, {"terms", terms}};
  if (f.weight) out["weight"] = weight_to_json(*f.weight);
  return out;
}

FJExpansion fj_from_json(const json& j) {
  FJExpansion f = fj_zero(j.at("p").get<i64>(), j.at("s").get<i64>(), j.at("m").get<int>(),
                          j.at("trunc").get<i64>(), j.at("rank").get<int>());
  i64 d = order_discriminant_constant(f.p);
  for (auto it = j.at("terms").begin(); it != j.at("terms").end(); ++it) {
    HermIndex h = HermIndex::from_key(it.key(), f.m, d);
    std::vector<WittElem> coeff;
    for (const auto& c : it.value()) coeff.push_back(witt_from_json(c, f.p, f.s));
    f.set_term(h, std::move(coeff));
  }
  if (j.contains("weight")) f.weight = weight_from_json(j.at("weight"));
  return f;
}

std::string canonical_dump(const json& j) { return j.dump(); }

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << canonical_dump(j) << "\n";
}

}  // namespace mutheta
