#include "purify/mutation.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "purify/printer.hpp"

namespace purify {

namespace {

bool is_relational(BinOp op) {
    switch (op) {
        case BinOp::Eq:
        case BinOp::Ne:
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return true;
        default: return false;
    }
}

bool is_arithmetic(BinOp op) {
    switch (op) {
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod: return true;
        default: return false;
    }
}

const std::vector<BinOp>& relational_ops() {
    static const std::vector<BinOp> ops{BinOp::Eq, BinOp::Ne, BinOp::Lt,
                                        BinOp::Le, BinOp::Gt, BinOp::Ge};
    return ops;
}

const std::vector<BinOp>& arithmetic_ops() {
    static const std::vector<BinOp> ops{BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div,
                                        BinOp::Mod};
    return ops;
}

struct MutationPoint {
    enum class Kind { Condition, Relational, Arithmetic, Constant };
    Kind kind{Kind::Condition};
    StmtId stmt{-1};   // Condition points
    ExprId expr{-1};   // the rest
};

// Fixed pre-order walk of one function body. A statement contributes its
// condition point first, then its expressions, then its nested blocks.
std::vector<MutationPoint> collect_points(const ParsedFile& f, const FunctionDecl& fn) {
    std::vector<MutationPoint> pts;

    std::function<void(ExprId)> walk_expr = [&](ExprId id) {
        if (id == no_expr) return;
        const Expr& e = f.expr(id);
        switch (e.kind) {
            case ExprKind::Binary:
                if (is_relational(e.bop)) {
                    pts.push_back({MutationPoint::Kind::Relational, -1, id});
                } else if (is_arithmetic(e.bop)) {
                    pts.push_back({MutationPoint::Kind::Arithmetic, -1, id});
                }
                walk_expr(e.lhs);
                walk_expr(e.rhs);
                break;
            case ExprKind::Unary: walk_expr(e.lhs); break;
            case ExprKind::Call:
                for (ExprId a : e.args) walk_expr(a);
                break;
            case ExprKind::IntLit:
                pts.push_back({MutationPoint::Kind::Constant, -1, id});
                break;
            default: break;
        }
    };

    std::function<void(const std::vector<StmtId>&)> walk_block;
    std::function<void(StmtId)> walk_stmt = [&](StmtId sid) {
        const Stmt& s = f.stmt(sid);
        switch (s.kind) {
            case StmtKind::Let:
            case StmtKind::Assign:
            case StmtKind::Throw:
            case StmtKind::Return:
            case StmtKind::ExprStmt:
            case StmtKind::Assert: walk_expr(s.e1); break;
            case StmtKind::AssertEquals:
                walk_expr(s.e1);
                walk_expr(s.e2);
                break;
            case StmtKind::If:
                pts.push_back({MutationPoint::Kind::Condition, sid, no_expr});
                walk_expr(s.e1);
                walk_block(s.body);
                walk_block(s.orelse);
                break;
            case StmtKind::While:
                pts.push_back({MutationPoint::Kind::Condition, sid, no_expr});
                walk_expr(s.e1);
                walk_block(s.body);
                break;
            case StmtKind::Try:
                walk_block(s.body);
                walk_block(s.orelse);
                break;
            case StmtKind::Fail:
            case StmtKind::HookCall: break;
        }
    };
    walk_block = [&](const std::vector<StmtId>& b) {
        for (StmtId s : b) walk_stmt(s);
    };

    walk_block(fn.body);
    return pts;
}

// Applies (op, payload) at one point; returns the ExprId whose text changed.
ExprId apply_point(ParsedFile& f, const MutationPoint& pt, MutationOperator op,
                   std::int64_t payload) {
    switch (op) {
        case MutationOperator::NegateCondition: {
            Stmt& s = f.stmts.at(static_cast<std::size_t>(pt.stmt));
            Expr neg;
            neg.kind = ExprKind::Unary;
            neg.uop = UnOp::Not;
            neg.lhs = s.e1;
            f.exprs.push_back(neg);
            f.expr_pos.push_back(f.expr_pos.at(static_cast<std::size_t>(s.e1)));
            s.e1 = static_cast<ExprId>(f.exprs.size() - 1);
            return s.e1;
        }
        case MutationOperator::RelationalReplace:
        case MutationOperator::ArithmeticReplace: {
            Expr& e = f.exprs.at(static_cast<std::size_t>(pt.expr));
            e.bop = static_cast<BinOp>(payload);
            return pt.expr;
        }
        case MutationOperator::ConstantPerturb: {
            Expr& e = f.exprs.at(static_cast<std::size_t>(pt.expr));
            e.int_val = payload;
            return pt.expr;
        }
    }
    throw std::invalid_argument("unknown mutation operator");
}

ExprId point_display_expr(const ParsedFile& f, const MutationPoint& pt) {
    return pt.kind == MutationPoint::Kind::Condition
               ? f.stmts.at(static_cast<std::size_t>(pt.stmt)).e1
               : pt.expr;
}

MutationOperator point_operator(const MutationPoint& pt) {
    switch (pt.kind) {
        case MutationPoint::Kind::Condition: return MutationOperator::NegateCondition;
        case MutationPoint::Kind::Relational: return MutationOperator::RelationalReplace;
        case MutationPoint::Kind::Arithmetic: return MutationOperator::ArithmeticReplace;
        case MutationPoint::Kind::Constant: return MutationOperator::ConstantPerturb;
    }
    throw std::invalid_argument("unknown mutation point kind");
}

// Replacement payloads for a point, in a fixed order; empty entries skipped.
std::vector<std::int64_t> point_payloads(const ParsedFile& f, const MutationPoint& pt) {
    std::vector<std::int64_t> out;
    switch (pt.kind) {
        case MutationPoint::Kind::Condition: out.push_back(0); break;
        case MutationPoint::Kind::Relational: {
            BinOp cur = f.expr(pt.expr).bop;
            for (BinOp r : relational_ops()) {
                if (r != cur) out.push_back(static_cast<std::int64_t>(r));
            }
            break;
        }
        case MutationPoint::Kind::Arithmetic: {
            BinOp cur = f.expr(pt.expr).bop;
            for (BinOp r : arithmetic_ops()) {
                if (r != cur) out.push_back(static_cast<std::int64_t>(r));
            }
            break;
        }
        case MutationPoint::Kind::Constant: {
            std::int64_t k = f.expr(pt.expr).int_val;
            std::vector<std::int64_t> candidates;
            if (k != std::numeric_limits<std::int64_t>::max()) candidates.push_back(k + 1);
            if (k != std::numeric_limits<std::int64_t>::min()) candidates.push_back(k - 1);
            candidates.push_back(0);
            for (std::int64_t c : candidates) {
                if (c == k) continue;
                if (std::find(out.begin(), out.end(), c) != out.end()) continue;
                out.push_back(c);
            }
            break;
        }
    }
    return out;
}

const ParsedFile* find_file(const std::vector<ParsedFile>& files, const std::string& path) {
    for (const ParsedFile& f : files) {
        if (f.path == path) return &f;
    }
    return nullptr;
}

// Uniform integer in [0, n) from raw 64-bit draws, by rejection; avoids the
// implementation-defined std::uniform_int_distribution.
std::uint64_t bounded_rand(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

}  // namespace

std::vector<Mutant> generate_mutants(const std::vector<ParsedFile>& files, std::uint64_t seed,
                                     std::optional<int> max,
                                     const std::vector<MutationOperator>& operators) {
    auto enabled = [&](MutationOperator op) {
        return std::find(operators.begin(), operators.end(), op) != operators.end();
    };

    std::vector<Mutant> all;
    for (const ParsedFile& f : files) {
        for (const FunctionDecl& fn : f.functions) {
            std::vector<MutationPoint> pts = collect_points(f, fn);
            for (std::size_t site = 0; site < pts.size(); ++site) {
                const MutationPoint& pt = pts[site];
                MutationOperator op = point_operator(pt);
                if (!enabled(op)) continue;
                for (std::int64_t payload : point_payloads(f, pt)) {
                    Mutant m;
                    m.id = static_cast<int>(all.size());
                    m.file = f.path;
                    m.function = fn.name;
                    m.site = static_cast<int>(site);
                    m.op = op;
                    m.payload = payload;
                    m.original = serialize_expr(f, point_display_expr(f, pt));
                    ParsedFile scratch = f;
                    ExprId changed = apply_point(scratch, pt, op, payload);
                    m.mutated = serialize_expr(scratch, changed);
                    all.push_back(std::move(m));
                }
            }
        }
    }

    if (!max || static_cast<std::size_t>(*max) >= all.size()) return all;
    if (*max <= 0) return {};

    std::mt19937_64 gen(seed);
    std::vector<std::size_t> idx(all.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t k = static_cast<std::size_t>(*max);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded_rand(gen, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<Mutant> picked;
    picked.reserve(k);
    for (std::size_t i : idx) picked.push_back(all[i]);
    return picked;
}

void apply_mutant(std::vector<ParsedFile>& files, const Mutant& m) {
    ParsedFile* target = nullptr;
    for (ParsedFile& f : files) {
        if (f.path == m.file) target = &f;
    }
    if (!target) throw std::invalid_argument("mutant " + std::to_string(m.id) +
                                             ": no file '" + m.file + "' in corpus");
    const FunctionDecl* fn = target->find_function(m.function);
    if (!fn) throw std::invalid_argument("mutant " + std::to_string(m.id) + ": no function '" +
                                         m.function + "' in '" + m.file + "'");
    std::vector<MutationPoint> pts = collect_points(*target, *fn);
    if (m.site < 0 || static_cast<std::size_t>(m.site) >= pts.size()) {
        throw std::invalid_argument("mutant " + std::to_string(m.id) + ": site " +
                                    std::to_string(m.site) + " out of range in '" + m.function +
                                    "'");
    }
    const MutationPoint& pt = pts[static_cast<std::size_t>(m.site)];
    if (point_operator(pt) != m.op) {
        throw std::invalid_argument("mutant " + std::to_string(m.id) + ": operator does not fit site " +
                                    std::to_string(m.site) + " in '" + m.function + "'");
    }
    apply_point(*target, pt, m.op, m.payload);
}

KillMatrix kill_matrix(const std::vector<ParsedFile>& files, const std::vector<Mutant>& mutants,
                       std::int64_t budget) {
    KillMatrix mx;
    for (const Mutant& m : mutants) {
        const ParsedFile* src = find_file(files, m.file);
        if (!src) {
            mx.application_errors[m.id] = "no file '" + m.file + "' in corpus";
            continue;
        }
        std::vector<ParsedFile> mutated{*src};
        try {
            apply_mutant(mutated, m);
        } catch (const std::invalid_argument& e) {
            mx.application_errors[m.id] = e.what();
            continue;
        }
        SuiteResult run = run_suite(mutated, ElementFilter::None, budget);
        bool killed = false;
        bool hang = false;
        for (const TestResult& r : run.results) {
            if (r.outcome.status == TestStatus::AssertionFailed ||
                r.outcome.status == TestStatus::UncaughtException) {
                killed = true;
            }
            if (r.outcome.status == TestStatus::BudgetExceeded) hang = true;
        }
        mx.outcomes[m.id] = killed ? MutantFate::Killed : hang ? MutantFate::Hang
                                                               : MutantFate::Alive;
    }
    return mx;
}

EquivalenceReport compare_matrices(const KillMatrix& original, const KillMatrix& refactored) {
    if (original.outcomes.size() != refactored.outcomes.size()) {
        throw std::invalid_argument("kill matrices cover different mutant sets");
    }
    EquivalenceReport rep;
    auto it = refactored.outcomes.begin();
    for (const auto& [id, fate] : original.outcomes) {
        if (it->first != id) {
            throw std::invalid_argument("kill matrices cover different mutant sets");
        }
        MutantFate other = it->second;
        ++it;
        if (fate == other) {
            switch (fate) {
                case MutantFate::Killed: ++rep.killed_both; break;
                case MutantFate::Alive: ++rep.alive_both; break;
                case MutantFate::Hang: ++rep.hang_both; break;
            }
        } else {
            rep.disagreements.push_back(FateDisagreement{id, fate, other});
        }
    }
    rep.equivalent = rep.disagreements.empty();
    return rep;
}

const char* to_string(MutationOperator op) {
    switch (op) {
        case MutationOperator::RelationalReplace: return "relational-replace";
        case MutationOperator::ArithmeticReplace: return "arithmetic-replace";
        case MutationOperator::NegateCondition: return "negate-condition";
        case MutationOperator::ConstantPerturb: return "constant-perturb";
    }
    return "?";
}

const char* to_string(MutantFate f) {
    switch (f) {
        case MutantFate::Killed: return "killed";
        case MutantFate::Alive: return "alive";
        case MutantFate::Hang: return "hang";
    }
    return "?";
}

}  // namespace purify
