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

// Text key files. The secret file stores the prime factors; everything else
// is recomputed on load.
//
//   ppsr-paillier-secret 1        ppsr-paillier-public 1
//   bits <modulus bits>           bits <modulus bits>
//   p <hex>                       n <hex>
//   q <hex>

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ppsr/crypto/paillier.hpp"
#include "ppsr/error.hpp"

namespace ppsr::crypto {

namespace detail {

inline BigInt read_hex_field(std::istream& in, const char* name, const std::string& src) {
  std::string tag, hex;
  if (!(in >> tag >> hex) || tag != name) {
    throw DataError(src + ": expected '" + name + " <hex>'");
  }
  BigInt v;
  if (v.set_str(hex, 16) != 0 || v <= 0) throw DataError(src + ": bad hex value for " + name);
  return v;
}

inline unsigned read_header(std::istream& in, const std::string& magic, const std::string& src) {
  std::string line;
  std::getline(in, line);
  if (line != magic + " 1") throw DataError(src + ": not a " + magic + " file");
  std::string tag;
  unsigned bits = 0;
  if (!(in >> tag >> bits) || tag != "bits") throw DataError(src + ": missing bits line");
  return bits;
}

}  // namespace detail

inline std::string format_secret_key(const Keypair& k) {
  std::ostringstream os;
  os << "ppsr-paillier-secret 1\nbits " << k.public_key().bits() << "\np "
     << k.secret_key().p.get_str(16) << "\nq " << k.secret_key().q.get_str(16) << "\n";
  return os.str();
}

inline std::string format_public_key(const PublicKey& pk) {
  std::ostringstream os;
  os << "ppsr-paillier-public 1\nbits " << pk.bits() << "\nn " << pk.n().get_str(16) << "\n";
  return os.str();
}

inline Keypair parse_secret_key(const std::string& text, const std::string& src = "<key>") {
  std::istringstream in(text);
  unsigned bits = detail::read_header(in, "ppsr-paillier-secret", src);
  BigInt p = detail::read_hex_field(in, "p", src);
  BigInt q = detail::read_hex_field(in, "q", src);
  Keypair k = Keypair::from_primes(p, q);
  if (k.public_key().bits() != bits) throw DataError(src + ": modulus size does not match header");
  return k;
}

inline PublicKey parse_public_key(const std::string& text, const std::string& src = "<key>") {
  std::istringstream in(text);
  unsigned bits = detail::read_header(in, "ppsr-paillier-public", src);
  PublicKey pk(detail::read_hex_field(in, "n", src));
  if (pk.bits() != bits) throw DataError(src + ": modulus size does not match header");
  return pk;
}

inline Keypair load_secret_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing key file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_secret_key(ss.str(), path.string());
}

}  // namespace ppsr::crypto
