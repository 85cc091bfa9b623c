// Copyright 2026 The qkcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qkcm {

// Positional encoding of many-body configurations, site 0 least significant.
class Basis {
 public:
  Basis(int n_sites, int local_dim);

  int n_sites() const noexcept { return n_sites_; }
  int local_dim() const noexcept { return local_dim_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(int site) const noexcept { return strides_[site]; }

  int level(std::size_t ordinal, int site) const noexcept {
    if (local_dim_ == 2) return static_cast<int>((ordinal >> site) & 1u);
    return static_cast<int>((ordinal / strides_[site]) % local_dim_);
  }

  std::size_t with_level(std::size_t ordinal, int site, int level) const noexcept {
    return ordinal + (static_cast<std::ptrdiff_t>(level) - this->level(ordinal, site)) *
                         static_cast<std::ptrdiff_t>(strides_[site]);
  }

  // Level counted as "excited": 1 for spins, the Rydberg level 2 for g/p/r.
  int excited_level() const noexcept { return local_dim_ - 1; }

  bool operator==(const Basis& other) const noexcept {
    return n_sites_ == other.n_sites_ && local_dim_ == other.local_dim_;
  }

 private:
  int n_sites_;
  int local_dim_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

class SpinConfiguration {
 public:
  SpinConfiguration(std::vector<int> levels, int local_dim);

  // Characters are site levels in site order: "110" has sites 0 and 1 excited.
  static SpinConfiguration parse(const std::string& text, int local_dim);
  static SpinConfiguration from_ordinal(const Basis& basis, std::size_t ordinal);
  static SpinConfiguration uniform(int n_sites, int local_dim, int level);

  int n_sites() const noexcept { return static_cast<int>(levels_.size()); }
  int local_dim() const noexcept { return local_dim_; }
  int level(int site) const { return levels_.at(site); }
  const std::vector<int>& levels() const noexcept { return levels_; }
  Basis basis() const { return Basis(n_sites(), local_dim_); }
  std::size_t ordinal() const;
  std::string to_string() const;

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<int> levels_;
  int local_dim_;
};

enum class Boundary { Periodic, Open };

enum class ConstraintKind { Unconstrained, East, FA, ExcludedVolume };

const char* to_string(ConstraintKind kind) noexcept;
const char* to_string(Boundary boundary) noexcept;

// Kinetic constraint f_k, a 0/1 function of the neighbours of site k.
// A neighbour that does not exist (open chain edge, or N = 1) contributes an
// identity factor, so the corresponding clause is permissive.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::Unconstrained;
  Boundary boundary = Boundary::Periodic;

  bool allows(const Basis& basis, std::size_t ordinal, int site) const noexcept {
    if (kind == ConstraintKind::Unconstrained) return true;
    const int n = basis.n_sites();
    int right = site + 1;
    int left = site - 1;
    if (boundary == Boundary::Periodic) {
      right %= n;
      left = (left + n) % n;
    }
    const bool has_right = right >= 0 && right < n && right != site;
    const bool has_left = left >= 0 && left < n && left != site;
    const int top = basis.excited_level();
    switch (kind) {
      case ConstraintKind::East:
        return !has_right || basis.level(ordinal, right) == top;
      case ConstraintKind::FA:
        if (!has_right || !has_left) return true;
        return basis.level(ordinal, right) == top || basis.level(ordinal, left) == top;
      case ConstraintKind::ExcludedVolume:
        return (!has_right || basis.level(ordinal, right) == 0) &&
               (!has_left || basis.level(ordinal, left) == 0);
      case ConstraintKind::Unconstrained:
        break;
    }
    return true;
  }

  bool operator==(const ConstraintSpec&) const = default;
};

}  // namespace qkcm
