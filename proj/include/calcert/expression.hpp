#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace calcert {

class ExpressionError : public std::invalid_argument {
public:
    ExpressionError(const std::string &what, std::size_t column)
        : std::invalid_argument(what), column_(column) {}
    /// 0-based byte offset of the offending character.
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Evaluates a numeric expression built from decimal literals, unary and
/// binary + and -, *, /, parentheses and sqrt(...). The Unicode minus sign
/// U+2212 is accepted as '-'. Throws ExpressionError.
double evaluate_expression(std::string_view text);

}  // namespace calcert
