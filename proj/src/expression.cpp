#include "calcert/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace calcert {

namespace {

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := ('+' | '-') factor | number | '(' expr ')' | "sqrt" '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    double parse() {
        const double v = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const {
        throw ExpressionError(msg + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(text_) + "\"",
                              pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    // Consumes '-' or U+2212.
    bool accept_minus() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    double expr() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept_minus()) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                const double d = factor();
                if (d == 0.0) {
                    fail("division by zero");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (accept('+')) {
            return factor();
        }
        if (accept_minus()) {
            return -factor();
        }
        if (accept('(')) {
            const double v = expr();
            expect(')');
            return v;
        }
        skip_space();
        if (text_.substr(pos_, 4) == "sqrt") {
            pos_ += 4;
            expect('(');
            const std::size_t at = pos_;
            const double v = expr();
            expect(')');
            if (v < 0.0) {
                pos_ = at;
                fail("sqrt of a negative number");
            }
            return std::sqrt(v);
        }
        return number();
    }

    double number() {
        skip_space();
        const char *begin = text_.data() + pos_;
        const char *end = text_.data() + text_.size();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr == begin) {
            fail("expected a number");
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

double evaluate_expression(std::string_view text) {
    const double v = Parser(text).parse();
    if (!std::isfinite(v)) {
        throw ExpressionError("expression does not evaluate to a finite number: \"" + std::string(text) + "\"", 0);
    }
    return v;
}

}  // namespace calcert
