#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fhs/opalg.hpp"

namespace fhs {

struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int length = 0;

  std::string str() const;
};

struct ParseError : std::runtime_error {
  ParseError(const SourceSpan& s, const std::string& msg) : std::runtime_error(s.str() + ": " + msg), span(s) {}
  SourceSpan span;
};

enum class DefKind { expr, op, matrixop, characteristic, density, generator };

std::string_view kind_name(DefKind k);

/// Point generator xi^t, xi^x, xi^xt, xi^zt, eta^u, eta^v.
struct PointGenerator {
  std::array<DiffExpr, 6> c;
};

using Tuple = std::vector<PseudoDiffOp>;
using Value = std::variant<PseudoDiffOp, MatrixOp, Tuple>;

struct Definition {
  std::string name;
  DefKind kind = DefKind::expr;
  SourceSpan span;
  Value value;

  DiffExpr expr() const;
  const PseudoDiffOp& op() const;
  const MatrixOp& matrix() const;
  Characteristic characteristic() const;
  PointGenerator generator() const;
};

class Definitions {
 public:
  const std::vector<Definition>& all() const { return defs_; }
  bool contains(std::string_view name) const;
  const Definition& at(std::string_view name) const;
  DiffExpr expr(std::string_view name) const { return at(name).expr(); }
  const PseudoDiffOp& op(std::string_view name) const { return at(name).op(); }
  const MatrixOp& matrix(std::string_view name) const { return at(name).matrix(); }
  Characteristic characteristic(std::string_view name) const { return at(name).characteristic(); }
  PointGenerator generator(std::string_view name) const { return at(name).generator(); }

  void add(Definition d);

 private:
  std::vector<Definition> defs_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

Definitions parse_defs(std::string_view text, const std::string& file = "<input>");
Definitions load_defs(const std::string& path);

/// Parses a single expression body against earlier definitions.
Value parse_value(std::string_view text, const Definitions& scope = {});
DiffExpr parse_expr(std::string_view text, const Definitions& scope = {});
PseudoDiffOp parse_operator(std::string_view text, const Definitions& scope = {});
MatrixOp parse_matrix(std::string_view text, const Definitions& scope = {});

std::string print(const DiffExpr& e);
std::string print(const PseudoDiffOp& p);
std::string print(const MatrixOp& m);
std::string print(const Characteristic& c);
std::string print(const Value& v);
std::string print(const Definition& d);
std::string print(const Definitions& d);

}  // namespace fhs
