#include "lf/parser.hpp"

#include <cctype>
#include <cstdlib>

#include "lf/errors.hpp"

namespace lf {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
  public:
    Parser(const std::string& text, int declared_n) : text_(text), n_(declared_n) {}

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+')) {
                e = e + parse_term();
            } else if (eat('-')) {
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*')) {
                e = e * parse_unary();
            } else if (eat('/')) {
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            std::size_t caret = pos_;
            ++pos_;
            Expr e = parse_unary();  // right-associative; allows e.g. v1^-2
            if (!e.is_number())
                throw SyntaxError("exponent must be a rational constant", caret);
            return Expr::pow(base, e.value());
        }
        return base;
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (is_ident_start(c)) return parse_ident();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            digits += text_[pos_++];
        std::string frac;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                frac += text_[pos_++];
        }
        if (digits.empty() && frac.empty()) throw SyntaxError("malformed number", start);
        if (digits.size() + frac.size() > 18) throw SyntaxError("numeric literal too long", start);
        long long whole = digits.empty() ? 0 : std::stoll(digits);
        if (frac.empty()) return Expr::integer(whole);
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        long long num = whole * den + std::stoll(frac);
        return Expr::number(Rational(num, den));
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        std::string name;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) name += text_[pos_++];

        if (name == "ln" || name == "exp" || name == "sin" || name == "cos" || name == "abs")
            return parse_call(name, start);

        if (name == "t") return t_();

        // q<i>, v<i>, a<i> with i >= 1 are coordinate/velocity/acceleration slots.
        if (name.size() >= 2 && (name[0] == 'q' || name[0] == 'v' || name[0] == 'a')) {
            bool all_digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) all_digits = false;
            if (all_digits && name[1] != '0') {
                int idx = std::atoi(name.c_str() + 1);
                if (n_ > 0 && idx > n_) throw IndexOutOfRangeError(name, n_, start);
                if (name[0] == 'q') return q_(idx);
                if (name[0] == 'v') return v_(idx);
                return a_(idx);
            }
        }

        // Anything else is a named parameter; a following '(' would mean an
        // unknown function.
        if (peek() == '(') throw UnknownFunctionError(name, start);
        return par_(name);
    }

    Expr parse_call(const std::string& fn, std::size_t start) {
        if (!eat('(')) throw SyntaxError("expected '(' after function '" + fn + "'", start);
        Expr arg = parse_sum();
        if (!eat(')')) throw SyntaxError("expected ')'", pos_);
        if (fn == "ln") return Expr::ln(arg);
        if (fn == "exp") return Expr::exp(arg);
        if (fn == "sin") return Expr::sin(arg);
        if (fn == "cos") return Expr::cos(arg);
        return Expr::abs(arg);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int n_;
};

}  // namespace

Expr parse(const std::string& text, int declared_n) { return Parser(text, declared_n).run(); }

}  // namespace lf
