#include "qcorr/serialize.hpp"

#include <fstream>
#include <sstream>
#include <utility>

namespace qcorr {

namespace {

std::string at(const std::string& path, int idx) {
  return path + "[" + std::to_string(idx) + "]";
}

std::string key(const std::string& path, const char* name) {
  return path + "." + name;
}

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ShapeError(path + ": expected an array, got " + std::string(j.type_name()));
  return j;
}

const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object())
    throw ShapeError(path + ": expected an object, got " + std::string(j.type_name()));
  return j;
}

const Json& field(const Json& j, const char* name, const std::string& path) {
  expect_object(j, path);
  auto it = j.find(name);
  if (it == j.end()) throw ShapeError(path + ": missing field \"" + name + "\"");
  return *it;
}

int expect_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ShapeError(path + ": expected an integer, got " + std::string(j.type_name()));
  return j.get<int>();
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ShapeError(path + ": expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

}  // namespace

Json to_json(const QuantumSpace& space) {
  Json j = Json::object();
  j["blocks"] = space.blocks();
  return j;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < v.size(); ++r) out.push_back(complex_to_json(v[r]));
  return out;
}

Json to_json(const AlgebraElement& x) {
  Json out = Json::array();
  for (int k = 0; k < x.space().block_count(); ++k) out.push_back(to_json(x.block(k)));
  return out;
}

Json to_json(const QuantumFamily& F) {
  const QuantumSpace& P = F.question_space();
  const QuantumSpace& O = F.answer_space();
  Json j = Json::object();
  j["P"] = to_json(P);
  j["O"] = to_json(O);
  j["d"] = F.d();
  Json gens = Json::array();
  for (int k = 0; k < O.block_count(); ++k) {
    Json jk = Json::array();
    for (int l = 0; l < P.block_count(); ++l) {
      Json jl = Json::array();
      for (int i = 0; i < O.block_dim(k); ++i) {
        Json ji = Json::array();
        for (int jj = 0; jj < O.block_dim(k); ++jj) {
          Json jjj = Json::array();
          for (int s = 0; s < P.block_dim(l); ++s) {
            Json js = Json::array();
            for (int t = 0; t < P.block_dim(l); ++t) js.push_back(to_json(F.gen(k, l, i, jj, s, t)));
            jjj.push_back(std::move(js));
          }
          ji.push_back(std::move(jjj));
        }
        jl.push_back(std::move(ji));
      }
      jk.push_back(std::move(jl));
    }
    gens.push_back(std::move(jk));
  }
  j["gens"] = std::move(gens);
  return j;
}

Json to_json(const CorrelationTensor& T) {
  const QuantumSpace& P = T.question_space();
  const QuantumSpace& O = T.answer_space();
  Json j = Json::object();
  j["P"] = to_json(P);
  j["O"] = to_json(O);
  // Twelve nested levels in the documented index order; innermost values
  // are [re, im] pairs.
  Json xk = Json::array();
  for (int k = 0; k < O.block_count(); ++k) {
    Json xkp = Json::array();
    for (int kp = 0; kp < O.block_count(); ++kp) {
      Json xl = Json::array();
      for (int l = 0; l < P.block_count(); ++l) {
        Json xlp = Json::array();
        for (int lp = 0; lp < P.block_count(); ++lp) {
          Json xi = Json::array();
          for (int i = 0; i < O.block_dim(k); ++i) {
            Json xj = Json::array();
            for (int jj = 0; jj < O.block_dim(k); ++jj) {
              Json xip = Json::array();
              for (int ip = 0; ip < O.block_dim(kp); ++ip) {
                Json xjp = Json::array();
                for (int jp = 0; jp < O.block_dim(kp); ++jp) {
                  Json xs = Json::array();
                  for (int s = 0; s < P.block_dim(l); ++s) {
                    Json xt = Json::array();
                    for (int t = 0; t < P.block_dim(l); ++t) {
                      Json xsp = Json::array();
                      for (int sp = 0; sp < P.block_dim(lp); ++sp) {
                        Json xtp = Json::array();
                        for (int tp = 0; tp < P.block_dim(lp); ++tp) {
                          xtp.push_back(
                              complex_to_json(T.at(k, kp, l, lp, i, jj, ip, jp, s, t, sp, tp)));
                        }
                        xsp.push_back(std::move(xtp));
                      }
                      xt.push_back(std::move(xsp));
                    }
                    xs.push_back(std::move(xt));
                  }
                  xjp.push_back(std::move(xs));
                }
                xip.push_back(std::move(xjp));
              }
              xj.push_back(std::move(xip));
            }
            xi.push_back(std::move(xj));
          }
          xlp.push_back(std::move(xi));
        }
        xl.push_back(std::move(xlp));
      }
      xkp.push_back(std::move(xl));
    }
    xk.push_back(std::move(xkp));
  }
  j["X"] = std::move(xk);
  return j;
}

Json to_json(const Realization& R) {
  Json j = Json::object();
  j["phi1"] = to_json(R.phi1);
  j["phi2"] = to_json(R.phi2);
  if (R.has_vector_state()) {
    j["xi"] = to_json(R.xi());
  } else {
    j["density"] = to_json(R.rho());
  }
  return j;
}

Json to_json(const BlockLinearMap& m) {
  Json j = Json::object();
  j["dom"] = to_json(m.dom());
  j["cod"] = to_json(m.cod());
  Json images = Json::array();
  for (int k = 0; k < m.dom().block_count(); ++k) {
    Json jk = Json::array();
    for (int i = 0; i < m.dom().block_dim(k); ++i) {
      Json ji = Json::array();
      for (int jj = 0; jj < m.dom().block_dim(k); ++jj) ji.push_back(to_json(m.image(k, i, jj)));
      jk.push_back(std::move(ji));
    }
    images.push_back(std::move(jk));
  }
  j["images"] = std::move(images);
  return j;
}

QuantumSpace space_from_json(const Json& j, const std::string& path) {
  const Json& blocks = field(j, "blocks", path);
  expect_array(blocks, key(path, "blocks"));
  std::vector<int> dims;
  dims.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    dims.push_back(expect_int(blocks[k], at(key(path, "blocks"), static_cast<int>(k))));
  }
  try {
    return QuantumSpace(std::move(dims));
  } catch (const ShapeError& e) {
    throw ShapeError(key(path, "blocks") + ": " + e.what());
  }
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  expect_array(j, path);
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    expect_array(row, at(path, static_cast<int>(r)));
    if (r == 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ShapeError(at(path, static_cast<int>(r)) + ": ragged matrix, row has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  at(at(path, static_cast<int>(r)), static_cast<int>(c)));
    }
  }
  if (rows == 0) m.resize(0, 0);
  return m;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  expect_array(j, path);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    v[static_cast<Eigen::Index>(r)] = complex_from_json(j[r], at(path, static_cast<int>(r)));
  }
  return v;
}

AlgebraElement element_from_json(const Json& j, const QuantumSpace& space,
                                 const std::string& path) {
  expect_array(j, path);
  if (static_cast<int>(j.size()) != space.block_count()) {
    throw ShapeError(path + ": expected " + std::to_string(space.block_count()) +
                     " block matrices, got " + std::to_string(j.size()));
  }
  AlgebraElement x(space);
  for (int k = 0; k < space.block_count(); ++k) {
    Matrix m = matrix_from_json(j[static_cast<std::size_t>(k)], at(path, k));
    if (m.rows() != space.block_dim(k) || m.cols() != space.block_dim(k)) {
      throw ShapeError(at(path, k) + ": block must be " + std::to_string(space.block_dim(k)) +
                       "x" + std::to_string(space.block_dim(k)) + ", got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    x.block(k) = std::move(m);
  }
  return x;
}

namespace {

const Json& level(const Json& j, std::size_t want, const std::string& path) {
  expect_array(j, path);
  if (j.size() != want) {
    throw ShapeError(path + ": expected " + std::to_string(want) + " entries, got " +
                     std::to_string(j.size()));
  }
  return j;
}

}  // namespace

QuantumFamily family_from_json(const Json& j, const std::string& path) {
  const QuantumSpace P = space_from_json(field(j, "P", path), key(path, "P"));
  const QuantumSpace O = space_from_json(field(j, "O", path), key(path, "O"));
  const int d = expect_int(field(j, "d", path), key(path, "d"));
  if (d < 1) throw ShapeError(key(path, "d") + ": must be >= 1");
  QuantumFamily F(P, O, d);
  const Json& gens = field(j, "gens", path);
  const std::string gpath = key(path, "gens");
  level(gens, static_cast<std::size_t>(O.block_count()), gpath);
  for (int k = 0; k < O.block_count(); ++k) {
    const std::string pk = at(gpath, k);
    const Json& jk = level(gens[static_cast<std::size_t>(k)],
                           static_cast<std::size_t>(P.block_count()), pk);
    for (int l = 0; l < P.block_count(); ++l) {
      const std::string pl = at(pk, l);
      const int nk = O.block_dim(k);
      const int ml = P.block_dim(l);
      const Json& jl = level(jk[static_cast<std::size_t>(l)], static_cast<std::size_t>(nk), pl);
      for (int i = 0; i < nk; ++i) {
        const std::string pi = at(pl, i);
        const Json& ji = level(jl[static_cast<std::size_t>(i)], static_cast<std::size_t>(nk), pi);
        for (int jj = 0; jj < nk; ++jj) {
          const std::string pj = at(pi, jj);
          const Json& jjj =
              level(ji[static_cast<std::size_t>(jj)], static_cast<std::size_t>(ml), pj);
          for (int s = 0; s < ml; ++s) {
            const std::string ps = at(pj, s);
            const Json& js =
                level(jjj[static_cast<std::size_t>(s)], static_cast<std::size_t>(ml), ps);
            for (int t = 0; t < ml; ++t) {
              const std::string pt = at(ps, t);
              Matrix m = matrix_from_json(js[static_cast<std::size_t>(t)], pt);
              if (m.rows() != d || m.cols() != d) {
                throw ShapeError(pt + ": generator must be " + std::to_string(d) + "x" +
                                 std::to_string(d) + ", got " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
              }
              F.gen(k, l, i, jj, s, t) = std::move(m);
            }
          }
        }
      }
    }
  }
  return F;
}

CorrelationTensor correlation_from_json(const Json& j, const std::string& path) {
  const QuantumSpace P = space_from_json(field(j, "P", path), key(path, "P"));
  const QuantumSpace O = space_from_json(field(j, "O", path), key(path, "O"));
  CorrelationTensor T(P, O);
  const Json& X = field(j, "X", path);
  const std::string xpath = key(path, "X");
  level(X, static_cast<std::size_t>(O.block_count()), xpath);
  for (int k = 0; k < O.block_count(); ++k) {
    const std::string p1 = at(xpath, k);
    const Json& j1 = level(X[static_cast<std::size_t>(k)],
                           static_cast<std::size_t>(O.block_count()), p1);
    for (int kp = 0; kp < O.block_count(); ++kp) {
      const std::string p2 = at(p1, kp);
      const Json& j2 = level(j1[static_cast<std::size_t>(kp)],
                             static_cast<std::size_t>(P.block_count()), p2);
      for (int l = 0; l < P.block_count(); ++l) {
        const std::string p3 = at(p2, l);
        const Json& j3 = level(j2[static_cast<std::size_t>(l)],
                               static_cast<std::size_t>(P.block_count()), p3);
        for (int lp = 0; lp < P.block_count(); ++lp) {
          const std::string p4 = at(p3, lp);
          const Json& j4 = level(j3[static_cast<std::size_t>(lp)],
                                 static_cast<std::size_t>(O.block_dim(k)), p4);
          for (int i = 0; i < O.block_dim(k); ++i) {
            const std::string p5 = at(p4, i);
            const Json& j5 = level(j4[static_cast<std::size_t>(i)],
                                   static_cast<std::size_t>(O.block_dim(k)), p5);
            for (int jj = 0; jj < O.block_dim(k); ++jj) {
              const std::string p6 = at(p5, jj);
              const Json& j6 = level(j5[static_cast<std::size_t>(jj)],
                                     static_cast<std::size_t>(O.block_dim(kp)), p6);
              for (int ip = 0; ip < O.block_dim(kp); ++ip) {
                const std::string p7 = at(p6, ip);
                const Json& j7 = level(j6[static_cast<std::size_t>(ip)],
                                       static_cast<std::size_t>(O.block_dim(kp)), p7);
                for (int jp = 0; jp < O.block_dim(kp); ++jp) {
                  const std::string p8 = at(p7, jp);
                  const Json& j8 = level(j7[static_cast<std::size_t>(jp)],
                                         static_cast<std::size_t>(P.block_dim(l)), p8);
                  for (int s = 0; s < P.block_dim(l); ++s) {
                    const std::string p9 = at(p8, s);
                    const Json& j9 = level(j8[static_cast<std::size_t>(s)],
                                           static_cast<std::size_t>(P.block_dim(l)), p9);
                    for (int t = 0; t < P.block_dim(l); ++t) {
                      const std::string p10 = at(p9, t);
                      const Json& j10 = level(j9[static_cast<std::size_t>(t)],
                                              static_cast<std::size_t>(P.block_dim(lp)), p10);
                      for (int sp = 0; sp < P.block_dim(lp); ++sp) {
                        const std::string p11 = at(p10, sp);
                        const Json& j11 = level(j10[static_cast<std::size_t>(sp)],
                                                static_cast<std::size_t>(P.block_dim(lp)), p11);
                        for (int tp = 0; tp < P.block_dim(lp); ++tp) {
                          T.at(k, kp, l, lp, i, jj, ip, jp, s, t, sp, tp) = complex_from_json(
                              j11[static_cast<std::size_t>(tp)], at(p11, tp));
                        }
                      }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return T;
}

Realization realization_from_json(const Json& j, const std::string& path) {
  QuantumFamily phi1 = family_from_json(field(j, "phi1", path), key(path, "phi1"));
  QuantumFamily phi2 = family_from_json(field(j, "phi2", path), key(path, "phi2"));
  expect_object(j, path);
  const bool has_xi = j.contains("xi");
  const bool has_density = j.contains("density");
  if (has_xi == has_density) {
    throw ShapeError(path + ": exactly one of \"xi\" or \"density\" is required");
  }
  if (has_xi) {
    return Realization{std::move(phi1), std::move(phi2),
                       vector_from_json(j["xi"], key(path, "xi"))};
  }
  return Realization{std::move(phi1), std::move(phi2),
                     matrix_from_json(j["density"], key(path, "density"))};
}

BlockLinearMap map_from_json(const Json& j, const std::string& path) {
  const QuantumSpace dom = space_from_json(field(j, "dom", path), key(path, "dom"));
  const QuantumSpace cod = space_from_json(field(j, "cod", path), key(path, "cod"));
  BlockLinearMap m(dom, cod);
  const Json& images = field(j, "images", path);
  const std::string ipath = key(path, "images");
  level(images, static_cast<std::size_t>(dom.block_count()), ipath);
  for (int k = 0; k < dom.block_count(); ++k) {
    const std::string pk = at(ipath, k);
    const Json& jk = level(images[static_cast<std::size_t>(k)],
                           static_cast<std::size_t>(dom.block_dim(k)), pk);
    for (int i = 0; i < dom.block_dim(k); ++i) {
      const std::string pi = at(pk, i);
      const Json& ji = level(jk[static_cast<std::size_t>(i)],
                             static_cast<std::size_t>(dom.block_dim(k)), pi);
      for (int jj = 0; jj < dom.block_dim(k); ++jj) {
        m.image(k, i, jj) = element_from_json(ji[static_cast<std::size_t>(jj)], cod, at(pi, jj));
      }
    }
  }
  return m;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw ShapeError(filename + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ShapeError(filename + ": parse error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

void write_text_file(const std::string& filename, const std::string& text) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error(filename + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(filename + ": write failed");
}

}  // namespace qcorr
