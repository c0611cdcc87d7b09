#include "basespace/complete.hpp"

#include <algorithm>
#include <mutex>

#include "basespace/space.hpp"

namespace basespace {

CompletionPoint embed(const Rational& x) {
  return CompletionPoint{ModulusCauchySeq{[x](std::size_t) { return x; }, [](std::size_t) { return std::size_t{0}; },
                                          "embed(" + format_rational(x) + ")", true}};
}

namespace {

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// floor(sqrt2 * 10^N) for a growing N, shared by all copies of the
// generator. Values depend only on the index.
class Sqrt2Digits {
 public:
  mpz_class scaled(std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    if (n > digits_) {
      digits_ = std::max<std::size_t>(n, 2 * digits_ + 16);
      root_ = isqrt(2 * pow10(2 * digits_));
    }
    mpz_class q;
    mpz_class d = pow10(digits_ - n);
    mpz_fdiv_q(q.get_mpz_t(), root_.get_mpz_t(), d.get_mpz_t());
    return q;
  }

 private:
  std::mutex mu_;
  std::size_t digits_ = 0;
  mpz_class root_ = 1;
};

}  // namespace

ModulusCauchySeq sqrt2_decimal() {
  auto digits = std::make_shared<Sqrt2Digits>();
  auto at = [digits](std::size_t n) {
    // The denominator 10^n only shares factors 2 and 5 with the numerator,
    // which is cheaper to strip than a general gcd.
    mpz_class num = digits->scaled(n);
    unsigned long twos = n, fives = n;
    if (num != 0) {
      twos = std::min<unsigned long>(n, mpz_scan1(num.get_mpz_t(), 0));
      fives = 0;
      while (fives < n && mpz_divisible_ui_p(num.get_mpz_t(), 5)) {
        mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), 5);
        ++fives;
      }
      num >>= twos;
    }
    mpz_class den, p5;
    mpz_ui_pow_ui(p5.get_mpz_t(), 5, n - fives);
    den = p5 << (n - twos);
    Rational r;
    mpq_set_num(r.get_mpq_t(), num.get_mpz_t());
    mpq_set_den(r.get_mpq_t(), den.get_mpz_t());
    return r;
  };
  auto modulus = [](std::size_t k) {
    mpz_class two_k = mpz_class(1) << k;
    std::size_t n = 0;
    while (pow10(n) < two_k) ++n;
    return n;
  };
  return ModulusCauchySeq{at, modulus, "sqrt2-decimal", false};
}

ModulusCauchySeq sqrt2_continued_fraction() {
  auto convergent = [](std::size_t n) {
    mpz_class p = 1, q = 1;
    for (std::size_t i = 0; i < n; ++i) {
      mpz_class np = p + 2 * q;
      q = p + q;
      p = np;
    }
    return std::pair{p, q};
  };
  auto at = [convergent](std::size_t n) {
    auto [p, q] = convergent(n);
    Rational r(p, q);
    r.canonicalize();
    return r;
  };
  auto modulus = [convergent](std::size_t k) {
    mpz_class two_k = mpz_class(1) << k;
    for (std::size_t m = 0;; ++m)
      if (convergent(m).second * convergent(m + 1).second > two_k) return m;
  };
  return ModulusCauchySeq{at, modulus, "sqrt2-continued-fraction", false};
}

ModulusCauchySeq table_sequence(std::vector<Rational> values, std::vector<std::size_t> modulus) {
  if (values.empty()) throw InputError("table sequence without values");
  if (modulus.empty()) throw InputError("table sequence without a modulus");
  auto vals = std::make_shared<const std::vector<Rational>>(std::move(values));
  auto mods = std::make_shared<const std::vector<std::size_t>>(std::move(modulus));
  auto at = [vals](std::size_t n) { return (*vals)[std::min(n, vals->size() - 1)]; };
  auto mod = [mods](std::size_t k) {
    if (k >= mods->size())
      throw PrecisionExhausted("modulus table covers levels 0.." + std::to_string(mods->size() - 1) + ", level " +
                               std::to_string(k) + " requested");
    return (*mods)[k];
  };
  return ModulusCauchySeq{at, mod, "table", false};
}

ModulusCauchySeq expression_sequence(const Expr& term, const Expr& modulus) {
  auto at = [term](std::size_t n) {
    Env env{{"n", Interval(Rational(static_cast<unsigned long>(n)))}};
    auto v = term.eval_exact(env);
    if (!v) throw InputError("sequence term '" + term.text() + "' is not exact at n=" + std::to_string(n));
    return *v;
  };
  auto mod = [modulus](std::size_t k) {
    Env env{{"k", Interval(Rational(static_cast<unsigned long>(k)))}};
    auto v = modulus.eval_exact(env);
    if (!v || v->get_den() != 1 || *v < 0 || !v->get_num().fits_ulong_p())
      throw InputError("modulus '" + modulus.text() + "' is not a natural number at k=" + std::to_string(k));
    return static_cast<std::size_t>(v->get_num().get_ui());
  };
  return ModulusCauchySeq{at, mod, term.text(), false};
}

EqResult eq_at_level(const CompletionPoint& p, const CompletionPoint& q, std::size_t k, const DensePresentation& pres) {
  const std::size_t h1 = pres.halving(k);
  const Rational threshold = DensePresentation::radius(h1);
  const std::size_t first = pres.halving(h1) + 1;
  EqResult r;
  for (std::size_t j = first; j <= first + 64; j += 4) {
    r.level = j;
    r.index_p = p.rep.modulus(j);
    r.index_q = q.rep.modulus(j);
    r.value_p = p.rep.at(r.index_p);
    r.value_q = q.rep.at(r.index_q);
    // Each representative is within 2^-j of its limit from its modulus on.
    Rational slack = (p.rep.constant ? Rational(0) : DensePresentation::radius(j)) +
                     (q.rep.constant ? Rational(0) : DensePresentation::radius(j));
    Interval d = pres.oracle->distance(r.value_p, r.value_q, static_cast<unsigned>(j) + 8);
    r.distance = Interval(std::max(Rational(0), Rational(d.lo - slack)), d.hi + slack);
    if (r.distance.hi < threshold) {
      r.status = Status::Holds;
      return r;
    }
    if (r.distance.lo >= threshold) {
      r.status = Status::Fails;
      return r;
    }
  }
  r.status = Status::Unknown;
  return r;
}

CauchyCheckResult cauchy_check(const ModulusCauchySeq& seq, std::size_t horizon, std::size_t max_level,
                               const DensePresentation& pres) {
  CauchyCheckResult res;
  // Levels whose modulus fits under the horizon, stopping at the first that
  // does not or that the modulus does not cover.
  std::vector<std::pair<std::size_t, std::size_t>> levels;
  for (std::size_t k = 0; k <= max_level; ++k) {
    std::size_t m = 0;
    try {
      m = seq.modulus(k);
    } catch (const PrecisionExhausted&) {
      break;
    }
    if (m > horizon) break;
    levels.emplace_back(k, m);
  }
  if (levels.empty()) {
    res.detail = "modulus at level 0 exceeds the horizon";
    return res;
  }
  std::size_t m0 = horizon;
  for (const auto& lv : levels) m0 = std::min(m0, lv.second);
  std::vector<Rational> vals;
  vals.reserve(horizon - m0 + 1);
  for (std::size_t n = m0; n <= horizon; ++n) vals.push_back(seq.at(n));
  auto at = [&](std::size_t n) -> const Rational& { return vals[n - m0]; };
  const bool linear = dynamic_cast<const RationalMetric*>(pres.oracle.get()) != nullptr;

  // Positions of the suffix extremes for the exact one-dimensional metric.
  std::vector<std::size_t> suf_min, suf_max;
  if (linear) {
    suf_min.resize(vals.size());
    suf_max.resize(vals.size());
    suf_min.back() = suf_max.back() = vals.size() - 1;
    for (std::size_t i = vals.size() - 1; i-- > 0;) {
      suf_min[i] = vals[i] < vals[suf_min[i + 1]] ? i : suf_min[i + 1];
      suf_max[i] = vals[i] > vals[suf_max[i + 1]] ? i : suf_max[i + 1];
    }
  }
  bool unknown = false;
  for (const auto& [k, m] : levels) {
    ++res.levels_checked;
    const Rational r = DensePresentation::radius(k);
    bool violated = false;
    if (linear) {
      violated = vals[suf_max[m - m0]] - vals[suf_min[m - m0]] >= r;
    } else {
      for (std::size_t j = m + 1; j <= horizon && !violated; ++j)
        for (std::size_t i = m; i < j && !violated; ++i) {
          Status st = in_radius(pres, at(i), at(j), k);
          violated = st == Status::Fails;
          unknown = unknown || st == Status::Unknown;
        }
    }
    if (!violated) continue;
    // Forward scan for the first index that is too far from an earlier one.
    std::size_t lo = m, hi = m;
    for (std::size_t j = m + 1; j <= horizon; ++j) {
      std::size_t other = j;
      if (linear) {
        if (at(j) - at(lo) >= r) other = lo;
        else if (at(hi) - at(j) >= r) other = hi;
        if (at(j) < at(lo)) lo = j;
        if (at(j) > at(hi)) hi = j;
      } else {
        for (std::size_t i = m; i < j && other == j; ++i)
          if (in_radius(pres, at(i), at(j), k) == Status::Fails) other = i;
      }
      if (other != j) {
        res.status = Status::Fails;
        res.level = k;
        res.i = other;
        res.j = j;
        res.detail = "u(g_" + std::to_string(other) + ", g_" + std::to_string(j) + ") outside eps_" +
                     std::to_string(k) + " although both indices are >= m(" + std::to_string(k) +
                     ") = " + std::to_string(m);
        return res;
      }
    }
  }
  if (unknown) {
    res.status = Status::Unknown;
    res.detail = "some pairs undecided at maximum precision";
  }
  return res;
}

namespace {

void check_omega(const DenseMap& f, const LevelMap& omega, const CompletionPoint& p, std::size_t k,
                 const DensePresentation& pres, std::size_t& samples) {
  const std::size_t w = omega(k);
  const Rational rw = DensePresentation::radius(w);
  const std::size_t base = p.rep.modulus(w);
  std::vector<Rational> pts;
  for (std::size_t d = 0; d < 6; ++d) pts.push_back(p.rep.at(base + d));
  const Rational x0 = pts.front();
  for (int num : {-3, -2, -1, 1, 2, 3}) pts.push_back(x0 + rw * Rational(num, 4));
  for (const auto& x : pts)
    for (const auto& y : pts) {
      if (in_radius(pres, x, y, w) != Status::Holds) continue;
      ++samples;
      if (in_radius(pres, f(x), f(y), k) == Status::Fails)
        throw PreconditionUnmet("level-transfer modulus violated at level " + std::to_string(k) + ": x=" +
                                format_rational(x) + " y=" + format_rational(y));
    }
}

}  // namespace

Extension uniform_extend(const DenseMap& f, const LevelMap& omega, const CompletionPoint& p, std::size_t k,
                         const DensePresentation& pres) {
  Extension e;
  check_omega(f, omega, p, k, pres, e.samples);
  e.level = omega(k);
  e.index = p.rep.modulus(e.level);
  e.value = f(p.rep.at(e.index));
  return e;
}

CompletionPoint extend_point(const DenseMap& f, const LevelMap& omega, const CompletionPoint& p) {
  auto rep = p.rep;
  ModulusCauchySeq out{[f, rep](std::size_t n) { return f(rep.at(n)); },
                       [omega, rep](std::size_t k) { return rep.modulus(omega(k)); }, "F(" + rep.name + ")",
                       rep.constant};
  return CompletionPoint{out};
}

TailResult tail_in_open(const ModulusCauchySeq& seq, const std::vector<BallDescriptor>& q, std::size_t k,
                        const DensePresentation& pres) {
  TailResult r;
  if (q.empty()) {
    r.status = Status::Fails;
    r.detail = "empty region";
    return r;
  }
  const std::size_t m = seq.modulus(k);
  const Rational a = seq.at(m);
  // Every later term is within `slack` of a.
  const Rational slack = seq.constant ? Rational(0) : DensePresentation::radius(k);
  bool all_outside = true;
  for (std::size_t b = 0; b < q.size(); ++b) {
    if (q[b].full) {
      r.status = Status::Holds;
      r.ball = b;
      r.detail = "full space";
      return r;
    }
    const Rational rad = DensePresentation::radius(q[b].level);
    Interval d = pres.oracle->distance(q[b].centre, a, static_cast<unsigned>(k) + 8);
    // Strict inequality in the first case covers the open ball; a constant
    // sequence sits exactly at a.
    bool inside = seq.constant ? d.hi < rad : d.hi + slack <= rad;
    if (inside) {
      r.status = Status::Holds;
      r.ball = b;
      r.detail = "tail from index " + std::to_string(m) + " lies in ball " + std::to_string(b);
      return r;
    }
    all_outside = all_outside && d.lo - slack >= rad;
  }
  if (all_outside) {
    r.status = Status::Fails;
    r.detail = "tail from index " + std::to_string(m) + " avoids every ball";
  } else {
    r.detail = "undecided at level " + std::to_string(k);
  }
  return r;
}

CompletionPoint diagonal(const std::function<CompletionPoint(std::size_t)>& points, const LevelMap& outer) {
  ModulusCauchySeq d{[points, outer](std::size_t n) {
                       CompletionPoint p = points(outer(n + 1));
                       return p.rep.at(p.rep.modulus(n + 1));
                     },
                     [](std::size_t k) { return k + 2; }, "diagonal", false};
  return CompletionPoint{d};
}

}  // namespace basespace
