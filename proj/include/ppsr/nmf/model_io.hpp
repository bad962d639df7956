/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Text layout of a FactorModel:
//
//   ppsr-factor-model 1
//   <m> <K> <n_v>
//   W <s> <rows> <cols>      followed by <rows> lines of row-major values
//   H <s> <rows> <cols>      likewise, for every view s
//   objective <count>        followed by one line of values
//   assignment <m>           followed by one line of cluster indices

#pragma once

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ppsr/error.hpp"
#include "ppsr/nmf/multiview_nmf.hpp"

namespace ppsr::nmf {

namespace detail {

inline void write_matrix(std::ostream& os, char tag, std::size_t s,
                         const Matrix& m) {
  os << tag << ' ' << s << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
}

inline Matrix read_matrix(std::istream& is, char tag, std::size_t s) {
  char t = 0;
  std::size_t idx = 0;
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> t >> idx >> rows >> cols) || t != tag || idx != s || rows < 0 ||
      cols < 0) {
    throw DataError(std::string("factor model: bad ") + tag + " header");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(is >> m(i, j))) throw DataError("factor model: truncated matrix");
    }
  }
  return m;
}

}  // namespace detail

inline void save_model(std::ostream& os, const FactorModel& model) {
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "ppsr-factor-model 1\n";
  os << model.items() << ' ' << model.K << ' ' << model.views() << '\n';
  for (std::size_t s = 0; s < model.views(); ++s) {
    detail::write_matrix(os, 'W', s, model.W[s]);
    detail::write_matrix(os, 'H', s, model.H[s]);
  }
  os << "objective " << model.objective_trace.size() << '\n';
  for (std::size_t i = 0; i < model.objective_trace.size(); ++i) {
    if (i) os << ' ';
    os << model.objective_trace[i];
  }
  os << '\n' << "assignment " << model.assignment.size() << '\n';
  for (std::size_t i = 0; i < model.assignment.size(); ++i) {
    if (i) os << ' ';
    os << model.assignment[i];
  }
  os << '\n';
}

inline FactorModel load_model(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "ppsr-factor-model" || version != 1) {
    throw DataError("factor model: unrecognized header");
  }
  Eigen::Index m = 0;
  std::size_t nv = 0;
  FactorModel model;
  if (!(is >> m >> model.K >> nv)) throw DataError("factor model: bad shape line");
  for (std::size_t s = 0; s < nv; ++s) {
    model.W.push_back(detail::read_matrix(is, 'W', s));
    model.H.push_back(detail::read_matrix(is, 'H', s));
    if (model.W.back().rows() != m || model.W.back().cols() != model.K) {
      throw DataError("factor model: W shape disagrees with header");
    }
  }
  std::string word;
  std::size_t n = 0;
  if (!(is >> word >> n) || word != "objective") {
    throw DataError("factor model: missing objective section");
  }
  model.objective_trace.resize(n);
  for (double& v : model.objective_trace) {
    if (!(is >> v)) throw DataError("factor model: truncated objective");
  }
  if (!(is >> word >> n) || word != "assignment" ||
      n != static_cast<std::size_t>(m)) {
    throw DataError("factor model: missing assignment section");
  }
  model.assignment.resize(n);
  for (int& a : model.assignment) {
    if (!(is >> a) || a < 0 || a >= model.K) {
      throw DataError("factor model: bad assignment entry");
    }
  }
  model.iterations = static_cast<int>(model.objective_trace.size()) - 1;
  return model;
}

}  // namespace ppsr::nmf
