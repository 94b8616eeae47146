#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "olab/error.hpp"
#include "olab/geometry.hpp"

namespace olab {

// Small arithmetic expression language for coefficient fields in descriptor
// files. Variables: x, y (aliases x1, x2), r = |x|. Constants: pi, e.
// Operators: + - * / ^ and comparisons < <= > >= (yielding 0 or 1).
namespace detail {

struct ExprNode {
    enum class Op { Num, VarX, VarY, VarR, Neg, Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Call };
    Op op = Op::Num;
    double value = 0.0;
    std::string fn;
    std::vector<std::shared_ptr<ExprNode>> args;

    double eval(const Point& p) const {
        switch (op) {
            case Op::Num: return value;
            case Op::VarX: return p[0];
            case Op::VarY: return p[1];
            case Op::VarR: return std::hypot(p[0], p[1]);
            case Op::Neg: return -args[0]->eval(p);
            case Op::Add: return args[0]->eval(p) + args[1]->eval(p);
            case Op::Sub: return args[0]->eval(p) - args[1]->eval(p);
            case Op::Mul: return args[0]->eval(p) * args[1]->eval(p);
            case Op::Div: return args[0]->eval(p) / args[1]->eval(p);
            case Op::Pow: return std::pow(args[0]->eval(p), args[1]->eval(p));
            case Op::Lt: return args[0]->eval(p) < args[1]->eval(p) ? 1.0 : 0.0;
            case Op::Le: return args[0]->eval(p) <= args[1]->eval(p) ? 1.0 : 0.0;
            case Op::Gt: return args[0]->eval(p) > args[1]->eval(p) ? 1.0 : 0.0;
            case Op::Ge: return args[0]->eval(p) >= args[1]->eval(p) ? 1.0 : 0.0;
            case Op::Call: return call(p);
        }
        return 0.0;
    }

    double call(const Point& p) const {
        double a = args[0]->eval(p);
        if (fn == "abs") return std::abs(a);
        if (fn == "sqrt") return std::sqrt(a);
        if (fn == "exp") return std::exp(a);
        if (fn == "log") return std::log(a);
        if (fn == "sin") return std::sin(a);
        if (fn == "cos") return std::cos(a);
        if (fn == "tan") return std::tan(a);
        if (fn == "floor") return std::floor(a);
        if (fn == "step") return a >= 0.0 ? 1.0 : 0.0;
        double b = args[1]->eval(p);
        if (fn == "min") return std::min(a, b);
        if (fn == "max") return std::max(a, b);
        if (fn == "pow") return std::pow(a, b);
        return 0.0;
    }
};

class ExprParser {
public:
    explicit ExprParser(std::string src) : s_(std::move(src)) {}

    std::shared_ptr<ExprNode> parse() {
        auto n = comparison();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    using NodePtr = std::shared_ptr<ExprNode>;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression '" + s_ + "': " + msg + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(const std::string& tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    static NodePtr make(ExprNode::Op op, std::vector<NodePtr> args) {
        auto n = std::make_shared<ExprNode>();
        n->op = op;
        n->args = std::move(args);
        return n;
    }

    NodePtr comparison() {
        auto lhs = additive();
        for (;;) {
            if (eat("<=")) lhs = make(ExprNode::Op::Le, {lhs, additive()});
            else if (eat(">=")) lhs = make(ExprNode::Op::Ge, {lhs, additive()});
            else if (eat("<")) lhs = make(ExprNode::Op::Lt, {lhs, additive()});
            else if (eat(">")) lhs = make(ExprNode::Op::Gt, {lhs, additive()});
            else return lhs;
        }
    }
    NodePtr additive() {
        auto lhs = multiplicative();
        for (;;) {
            if (eat("+")) lhs = make(ExprNode::Op::Add, {lhs, multiplicative()});
            else if (eat("-")) lhs = make(ExprNode::Op::Sub, {lhs, multiplicative()});
            else return lhs;
        }
    }
    NodePtr multiplicative() {
        auto lhs = unary();
        for (;;) {
            if (eat("*")) lhs = make(ExprNode::Op::Mul, {lhs, unary()});
            else if (eat("/")) lhs = make(ExprNode::Op::Div, {lhs, unary()});
            else return lhs;
        }
    }
    NodePtr unary() {
        if (eat("-")) return make(ExprNode::Op::Neg, {unary()});
        if (eat("+")) return unary();
        return power();
    }
    NodePtr power() {
        auto base = primary();
        if (eat("^")) return make(ExprNode::Op::Pow, {base, unary()});
        return base;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = 0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            auto n = std::make_shared<ExprNode>();
            n->value = v;
            return n;
        }
        if (eat("(")) {
            auto n = comparison();
            if (!eat(")")) fail("expected ')'");
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (eat("(")) {
                static const std::vector<std::string> unary_fns = {"abs", "sqrt", "exp", "log", "sin",
                                                                   "cos", "tan", "floor", "step"};
                static const std::vector<std::string> binary_fns = {"min", "max", "pow"};
                auto n = std::make_shared<ExprNode>();
                n->op = ExprNode::Op::Call;
                n->fn = id;
                n->args.push_back(comparison());
                bool is_unary = std::find(unary_fns.begin(), unary_fns.end(), id) != unary_fns.end();
                bool is_binary = std::find(binary_fns.begin(), binary_fns.end(), id) != binary_fns.end();
                if (!is_unary && !is_binary) fail("unknown function '" + id + "'");
                if (is_binary) {
                    if (!eat(",")) fail("expected ',' in call to " + id);
                    n->args.push_back(comparison());
                }
                if (!eat(")")) fail("expected ')' after arguments");
                return n;
            }
            auto n = std::make_shared<ExprNode>();
            if (id == "x" || id == "x1") n->op = ExprNode::Op::VarX;
            else if (id == "y" || id == "x2") n->op = ExprNode::Op::VarY;
            else if (id == "r") n->op = ExprNode::Op::VarR;
            else if (id == "pi") n->value = std::numbers::pi;
            else if (id == "e") n->value = std::numbers::e;
            else fail("unknown identifier '" + id + "'");
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string s_;
    size_t pos_ = 0;
};

}  // namespace detail

inline std::function<double(const Point&)> compile_expression(const std::string& src) {
    auto root = detail::ExprParser(src).parse();
    return [root](const Point& p) { return root->eval(p); };
}

}  // namespace olab
