#include <cctype>
#include <memory>

#include "avcp/symalg.hpp"

namespace avcp::symalg {

namespace {

// AST shared by the classical and operator evaluators; multiplication order
// is preserved so the operator context can stay order-sensitive.
struct ExprNode {
  enum class Kind { Number, Symbol, ImaginaryUnit, Add, Sub, Mul, Div, Pow, Neg };

  Kind kind;
  std::size_t offset = 0;
  RationalComplex number;
  SymbolId symbol = -1;
  unsigned exponent = 0;
  std::unique_ptr<ExprNode> lhs, rhs;
};

using NodePtr = std::unique_ptr<ExprNode>;

class Parser {
public:
  Parser(std::string_view text, const AlgebraPtr& alg)
      : text_(text), alg_(alg) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return root;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(
                                      text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr make(ExprNode::Kind kind, std::size_t offset) {
    auto n = std::make_unique<ExprNode>();
    n->kind = kind;
    n->offset = offset;
    return n;
  }

  NodePtr parse_expr() {
    skip_ws();
    const std::size_t start = pos_;
    NodePtr node;
    if (consume('-')) {
      node = make(ExprNode::Kind::Neg, start);
      node->lhs = parse_term();
    } else {
      node = parse_term();
    }
    while (true) {
      skip_ws();
      const std::size_t at = pos_;
      if (consume('+')) {
        auto op = make(ExprNode::Kind::Add, at);
        op->lhs = std::move(node);
        op->rhs = parse_term();
        node = std::move(op);
      } else if (consume('-')) {
        auto op = make(ExprNode::Kind::Sub, at);
        op->lhs = std::move(node);
        op->rhs = parse_term();
        node = std::move(op);
      } else {
        return node;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr node = parse_factor();
    while (true) {
      skip_ws();
      const std::size_t at = pos_;
      if (consume('*')) {
        auto op = make(ExprNode::Kind::Mul, at);
        op->lhs = std::move(node);
        op->rhs = parse_factor();
        node = std::move(op);
      } else if (consume('/')) {
        auto op = make(ExprNode::Kind::Div, at);
        op->lhs = std::move(node);
        op->rhs = parse_factor();
        node = std::move(op);
      } else {
        return node;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    skip_ws();
    const std::size_t at = pos_;
    if (consume('^')) {
      auto op = make(ExprNode::Kind::Pow, at);
      op->lhs = std::move(base);
      op->exponent = parse_uint();
      return op;
    }
    return base;
  }

  unsigned parse_uint() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw ParseError("expected an unsigned integer exponent", pos_);
    }
    unsigned long v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
      if (v > 1u << 20) throw ParseError("exponent too large", start);
      ++pos_;
    }
    return static_cast<unsigned>(v);
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of input", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!consume(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_ident();
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    std::string digits;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_++];
    }
    std::string frac;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        frac += text_[pos_++];
      }
      if (frac.empty()) {
        throw ParseError("expected digits after decimal point", pos_);
      }
    }
    // Decimal literals become exact rationals: 0.25 -> 25/100. Base 10
    // explicitly, so leading zeros are not read as octal.
    mpz_class num(digits + frac, 10);
    mpz_class den(1);
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    auto node = make(ExprNode::Kind::Number, start);
    node->number = RationalComplex(q);
    return node;
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      name += text_[pos_++];
    }
    if (name == "i") {
      return make(ExprNode::Kind::ImaginaryUnit, start);
    }
    auto id = alg_->lookup(name);
    if (!id) {
      throw UnknownSymbolError("unknown symbol '" + name + "' at offset " +
                               std::to_string(start));
    }
    auto node = make(ExprNode::Kind::Symbol, start);
    node->symbol = *id;
    return node;
  }

  std::string_view text_;
  const AlgebraPtr& alg_;
  std::size_t pos_ = 0;
};

// Evaluators. Both produce exact coefficients; only the multiplication
// semantics differ.

ClassicalPoly eval_classical(const ExprNode& n, const AlgebraPtr& alg) {
  switch (n.kind) {
    case ExprNode::Kind::Number:
      return ClassicalPoly::constant(alg, n.number);
    case ExprNode::Kind::ImaginaryUnit:
      return ClassicalPoly::constant(alg, RationalComplex::i());
    case ExprNode::Kind::Symbol:
      return ClassicalPoly::symbol(alg, n.symbol);
    case ExprNode::Kind::Add:
      return eval_classical(*n.lhs, alg) + eval_classical(*n.rhs, alg);
    case ExprNode::Kind::Sub:
      return eval_classical(*n.lhs, alg) - eval_classical(*n.rhs, alg);
    case ExprNode::Kind::Mul:
      return eval_classical(*n.lhs, alg) * eval_classical(*n.rhs, alg);
    case ExprNode::Kind::Div: {
      const ClassicalPoly divisor = eval_classical(*n.rhs, alg);
      if (!divisor.is_scalar_monomial()) {
        throw ParseError("division only by scalar factors", n.offset);
      }
      return eval_classical(*n.lhs, alg).divided_by(divisor);
    }
    case ExprNode::Kind::Pow:
      return eval_classical(*n.lhs, alg).pow(n.exponent);
    case ExprNode::Kind::Neg:
      return -eval_classical(*n.lhs, alg);
  }
  throw Error("unreachable");
}

NCPoly eval_operator(const ExprNode& n, const AlgebraPtr& alg) {
  switch (n.kind) {
    case ExprNode::Kind::Number:
      return NCPoly::constant(alg, n.number);
    case ExprNode::Kind::ImaginaryUnit:
      return NCPoly::constant(alg, RationalComplex::i());
    case ExprNode::Kind::Symbol:
      return NCPoly::symbol(alg, n.symbol);
    case ExprNode::Kind::Add:
      return eval_operator(*n.lhs, alg) + eval_operator(*n.rhs, alg);
    case ExprNode::Kind::Sub:
      return eval_operator(*n.lhs, alg) - eval_operator(*n.rhs, alg);
    case ExprNode::Kind::Mul:
      return eval_operator(*n.lhs, alg) * eval_operator(*n.rhs, alg);
    case ExprNode::Kind::Div: {
      const NCPoly divisor = eval_operator(*n.rhs, alg);
      if (!divisor.is_scalar_multiple_of_identity()) {
        throw ParseError("division only by scalar factors", n.offset);
      }
      ClassicalPoly d = divisor.terms().empty()
                            ? ClassicalPoly::zero(alg)
                            : divisor.terms().begin()->second;
      if (!d.is_scalar_monomial()) {
        throw ParseError("division only by scalar factors", n.offset);
      }
      return eval_operator(*n.lhs, alg).divided_by(d);
    }
    case ExprNode::Kind::Pow:
      return eval_operator(*n.lhs, alg).pow(n.exponent);
    case ExprNode::Kind::Neg:
      return -eval_operator(*n.lhs, alg);
  }
  throw Error("unreachable");
}

}  // namespace

ClassicalPoly parse_classical(std::string_view text, AlgebraPtr alg) {
  Parser parser(text, alg);
  const NodePtr root = parser.parse();
  return eval_classical(*root, alg);
}

NCPoly parse_operator(std::string_view text, AlgebraPtr alg) {
  Parser parser(text, alg);
  const NodePtr root = parser.parse();
  return eval_operator(*root, alg);
}

}  // namespace avcp::symalg
