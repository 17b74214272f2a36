#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hd0l/word.hpp"

namespace hd0l {

using BigInt = boost::multiprecision::cpp_int;

/// Boolean square matrix stored as packed rows.
class SupportMatrix {
public:
  SupportMatrix() = default;
  explicit SupportMatrix(std::size_t n);
  static SupportMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  bool at(std::size_t row, std::size_t col) const {
    return (rows_[row * stride_ + col / 64] >> (col % 64)) & 1U;
  }
  void set(std::size_t row, std::size_t col, bool value = true);

  bool all_true() const;
  bool column_empty(std::size_t col) const;
  std::vector<std::size_t> column(std::size_t col) const;
  SupportMatrix submatrix(const std::vector<std::size_t>& indices) const;

  friend SupportMatrix operator*(const SupportMatrix& x, const SupportMatrix& y);
  friend bool operator==(const SupportMatrix&, const SupportMatrix&) = default;

private:
  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> rows_;
};

SupportMatrix power(const SupportMatrix& m, std::uint64_t k);

/// m[i][j] = number of occurrences of codomain letter i in image of domain
/// letter j.
class IncidenceMatrix {
public:
  IncidenceMatrix() = default;
  IncidenceMatrix(Alphabet rows, Alphabet cols);

  const Alphabet& rows() const { return rows_; }
  const Alphabet& cols() const { return cols_; }
  const BigInt& at(std::size_t row, std::size_t col) const {
    return entries_[row * cols_.size() + col];
  }
  BigInt& at(std::size_t row, std::size_t col) {
    return entries_[row * cols_.size() + col];
  }
  SupportMatrix support() const;

  friend IncidenceMatrix operator*(const IncidenceMatrix& x,
                                   const IncidenceMatrix& y);
  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

private:
  Alphabet rows_;
  Alphabet cols_;
  std::vector<BigInt> entries_;
};

IncidenceMatrix incidence(const Morphism& m);
IncidenceMatrix power(const IncidenceMatrix& m, std::uint64_t k);

/// Positivity pattern of incidence(sigma), computed without counting.
SupportMatrix support_of(const Morphism& sigma);

/// True iff M^(n^2-2n+2) is all-true.
bool is_primitive(const SupportMatrix& m);

enum class ComponentClass { Null, Unit, Primitive };

const char* to_string(ComponentClass c);

struct Component {
  std::vector<Letter> letters;
  ComponentClass kind = ComponentClass::Null;
  bool principal = false;
};

/// Letter partition under which incidence(sigma^power) is lower block
/// triangular. Non-principal components come first, principal ones last.
struct PrimitiveComponentDecomposition {
  std::uint64_t power = 1;
  std::vector<Component> components;
  std::size_t non_principal = 0; // q

  std::vector<Letter> letter_order() const;
  std::size_t component_of(Letter l) const;
};

PrimitiveComponentDecomposition component_decomposition(const Morphism& sigma);

/// lcm of the cyclicity indices of the strongly connected components of the
/// support graph (edge j -> i when i occurs in the image of j).
std::uint64_t cyclicity_lcm(const SupportMatrix& m);

struct LetterInfo {
  bool growing = false;
  bool erasing = false;
  bool mortal = false;
};

class LetterClassification {
public:
  LetterClassification() = default;
  LetterClassification(Alphabet alphabet, std::vector<LetterInfo> info)
      : alphabet_(std::move(alphabet)), info_(std::move(info)) {}

  const Alphabet& alphabet() const { return alphabet_; }
  const LetterInfo& operator[](Letter l) const { return info_[alphabet_.index_of(l)]; }
  const LetterInfo& at(std::size_t i) const { return info_[i]; }
  bool growing(Letter l) const { return (*this)[l].growing; }
  bool all_growing() const;
  std::vector<Letter> growing_letters() const;
  std::vector<Letter> non_growing_letters() const;
  std::vector<Letter> erasing_letters() const;

private:
  Alphabet alphabet_;
  std::vector<LetterInfo> info_;
};

LetterClassification classify_letters(const Morphism& sigma);

/// |A| for a morphism already in decomposition form (power 1); verified.
std::size_t letters_stabilization_exponent(const Morphism& sigma);

/// (P1): every strongly connected component of the support graph is a
/// loopless singleton or an all-positive block.
bool has_block_form(const SupportMatrix& s);
bool has_block_form(const Morphism& sigma);

/// (P2): letters of sigma(b) and sigma^2(b) coincide for every b.
bool has_stable_letter_sets(const SupportMatrix& s);
bool has_stable_letter_sets(const Morphism& sigma);

enum class ExponentPolicy {
  AlphabetMultiple, ///< e = p·|A|·t, smallest t that verifies
  Minimal,          ///< e = p·t, smallest t that verifies
};

/// Exponent e such that sigma^e satisfies (P1) and (P2), checked on supports.
std::uint64_t stable_exponent(const Morphism& sigma,
                              ExponentPolicy policy = ExponentPolicy::AlphabetMultiple);

} // namespace hd0l
