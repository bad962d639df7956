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

// Plain-text dataset dump, mainly for debugging and for handing a synthetic
// dataset between CLI subcommands. Tab-separated throughout:
//
//   ppsr-dataset 1
//   name <name>
//   shape <n_users> <n_items> <n_views>
//   view <id> <rows> <cols> <name>        followed by <rows> lines of values
//   ratings <n_users> <n_items> <rank_max> followed by <n_users> lines
//   user_ids <n> / item_ids <n> / item_truth <n> / user_groups <n>
//                                         each followed by one line of values
//   follows <n>                           then n lines "from to"
//   likes|comments|reposts <n>            then n lines "user article text"
//   publications <n>                      then n lines "user text"
//   end
//
// Values are written in shortest round-trip form, so a dump reloads exactly.
// Tabs and newlines inside texts are replaced by spaces.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ppsr/data/dataset.hpp"
#include "ppsr/data/tsv.hpp"
#include "ppsr/error.hpp"

namespace ppsr::data {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline std::string clean_text(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

template <typename T>
void write_values(std::ostream& out, const char* tag, const std::vector<T>& v) {
  out << tag << '\t' << v.size() << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "\t" : "") << v[i];
  out << '\n';
}

inline void write_interactions(std::ostream& out, const char* tag,
                               const std::vector<social::Interaction>& v) {
  out << tag << '\t' << v.size() << '\n';
  for (const auto& e : v) out << e.user << '\t' << e.article << '\t' << clean_text(e.text) << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::vector<std::string> next() {
    if (pos_ >= text_.size()) throw fail("unexpected end of dump");
    std::size_t nl = text_.find('\n', pos_);
    std::string_view line = text_.substr(pos_, nl == std::string_view::npos ? nl : nl - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) return {};
    return split_tabs(line);
  }

  std::vector<std::string> expect(std::string_view tag, std::size_t fields) {
    auto f = next();
    if (f.empty() || f[0] != tag || f.size() != fields) {
      throw fail("expected '" + std::string(tag) + "' line with " + std::to_string(fields) +
                 " fields");
    }
    return f;
  }

  std::int64_t integer(const std::string& s) {
    std::int64_t v;
    if (!parse_int(s, v)) throw fail("expected an integer, got '" + s + "'");
    return v;
  }

  double real(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw fail("expected a number, got '" + s + "'");
    return v;
  }

  std::size_t size(const std::string& s) {
    std::int64_t v = integer(s);
    if (v < 0) throw fail("negative size");
    return static_cast<std::size_t>(v);
  }

  DataError fail(const std::string& what) const {
    return DataError("dump line " + std::to_string(line_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

inline std::vector<std::int64_t> read_int_row(LineReader& r, std::string_view tag) {
  auto h = r.expect(tag, 2);
  const std::size_t n = r.size(h[1]);
  auto f = r.next();
  if (f.size() != n) throw r.fail("wrong value count for " + std::string(tag));
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(r.integer(f[i]));
  return out;
}

inline std::vector<social::Interaction> read_interactions(LineReader& r, std::string_view tag) {
  auto h = r.expect(tag, 2);
  std::vector<social::Interaction> out(r.size(h[1]));
  for (auto& e : out) {
    auto f = r.next();
    if (f.size() != 3) throw r.fail("interaction needs 3 fields");
    e.user = static_cast<social::UserId>(r.integer(f[0]));
    e.article = static_cast<std::uint32_t>(r.integer(f[1]));
    e.text = f[2];
  }
  return out;
}

}  // namespace detail

inline void write_dump(std::ostream& out, const Dataset& ds) {
  ds.check_shapes();
  out << "ppsr-dataset 1\n";
  out << "name\t" << detail::clean_text(ds.name) << '\n';
  out << "shape\t" << ds.n_users() << '\t' << ds.n_items() << '\t' << ds.views.size() << '\n';
  for (std::size_t s = 0; s < ds.views.size(); ++s) {
    const auto& v = ds.views[s].data;
    std::string vname = s < ds.view_names.size() ? ds.view_names[s] : "view" + std::to_string(s);
    out << "view\t" << ds.views[s].view_id << '\t' << v.rows() << '\t' << v.cols() << '\t'
        << detail::clean_text(vname) << '\n';
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index j = 0; j < v.cols(); ++j) {
        out << (j ? "\t" : "") << detail::format_double(v(i, j));
      }
      out << '\n';
    }
  }
  out << "ratings\t" << ds.n_users() << '\t' << ds.n_items() << '\t'
      << int(ds.ratings.rank_max()) << '\n';
  for (std::size_t u = 0; u < ds.n_users(); ++u) {
    for (std::size_t i = 0; i < ds.n_items(); ++i) {
      out << (i ? "\t" : "") << int(ds.ratings.at(u, i));
    }
    out << '\n';
  }
  detail::write_values(out, "user_ids", ds.user_ids);
  detail::write_values(out, "item_ids", ds.item_ids);
  detail::write_values(out, "item_truth", ds.item_truth);
  detail::write_values(out, "user_groups", ds.user_groups);
  out << "follows\t" << ds.social.follows.size() << '\n';
  for (const auto& e : ds.social.follows) out << e.from << '\t' << e.to << '\n';
  detail::write_interactions(out, "likes", ds.social.likes);
  detail::write_interactions(out, "comments", ds.social.comments);
  detail::write_interactions(out, "reposts", ds.social.reposts);
  std::size_t n_pub = 0;
  for (const auto& p : ds.social.publications) n_pub += p.size();
  out << "publications\t" << n_pub << '\n';
  for (std::size_t u = 0; u < ds.social.publications.size(); ++u) {
    for (const auto& t : ds.social.publications[u]) out << u << '\t' << detail::clean_text(t) << '\n';
  }
  out << "end\n";
}

inline std::string dump_to_string(const Dataset& ds) {
  std::ostringstream ss;
  write_dump(ss, ds);
  return ss.str();
}

inline Dataset parse_dump(std::string_view text) {
  detail::LineReader r(text);
  if (auto f = r.next(); f.size() != 1 || f[0] != "ppsr-dataset 1") {
    throw r.fail("not a ppsr dataset dump (bad header)");
  }
  Dataset ds;
  auto name = r.next();
  if (name.empty() || name[0] != "name") throw r.fail("expected 'name' line");
  ds.name = name.size() > 1 ? name[1] : "";
  auto shape = r.expect("shape", 4);
  const std::size_t n_u = r.size(shape[1]), m = r.size(shape[2]), n_v = r.size(shape[3]);
  for (std::size_t s = 0; s < n_v; ++s) {
    auto h = r.expect("view", 5);
    const std::size_t rows = r.size(h[2]), cols = r.size(h[3]);
    nmf::Matrix v(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      auto f = r.next();
      if (f.size() != cols) throw r.fail("view row has wrong length");
      for (std::size_t j = 0; j < cols; ++j) v(i, j) = r.real(f[j]);
    }
    ds.views.push_back({std::move(v), static_cast<int>(r.integer(h[1]))});
    ds.view_names.push_back(h[4]);
  }
  auto rh = r.expect("ratings", 4);
  if (r.size(rh[1]) != n_u || r.size(rh[2]) != m) throw r.fail("ratings shape mismatch");
  std::int64_t rank_max = r.integer(rh[3]);
  if (rank_max < 1 || rank_max > 255) throw r.fail("rank_max out of range");
  ds.ratings = protocol::RankMatrix(n_u, m, static_cast<std::uint8_t>(rank_max));
  for (std::size_t u = 0; u < n_u; ++u) {
    auto f = r.next();
    if (f.size() != m) throw r.fail("ratings row has wrong length");
    for (std::size_t i = 0; i < m; ++i) ds.ratings.set(u, i, static_cast<int>(r.integer(f[i])));
  }
  ds.user_ids = detail::read_int_row(r, "user_ids");
  ds.item_ids = detail::read_int_row(r, "item_ids");
  for (auto v : detail::read_int_row(r, "item_truth")) ds.item_truth.push_back(static_cast<int>(v));
  for (auto v : detail::read_int_row(r, "user_groups")) ds.user_groups.push_back(static_cast<int>(v));
  ds.social.n_users = n_u;
  auto fh = r.expect("follows", 2);
  ds.social.follows.resize(r.size(fh[1]));
  for (auto& e : ds.social.follows) {
    auto f = r.next();
    if (f.size() != 2) throw r.fail("follow needs 2 fields");
    e = {static_cast<social::UserId>(r.integer(f[0])), static_cast<social::UserId>(r.integer(f[1]))};
  }
  ds.social.likes = detail::read_interactions(r, "likes");
  ds.social.comments = detail::read_interactions(r, "comments");
  ds.social.reposts = detail::read_interactions(r, "reposts");
  ds.social.publications.assign(n_u, {});
  auto ph = r.expect("publications", 2);
  for (std::size_t k = r.size(ph[1]); k > 0; --k) {
    auto f = r.next();
    if (f.empty() || f.size() > 2) throw r.fail("publication needs user and text");
    std::size_t u = r.size(f[0]);
    if (u >= n_u) throw r.fail("publication user out of range");
    ds.social.publications[u].push_back(f.size() == 2 ? f[1] : "");
  }
  r.expect("end", 1);
  ds.check_shapes();
  return ds;
}

inline Dataset read_dump(const std::filesystem::path& path) {
  return parse_dump(read_text_file(path));
}

}  // namespace ppsr::data
