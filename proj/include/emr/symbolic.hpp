#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace emr {

using Word = std::vector<int>;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// p^n, throws on overflow past 2^62
std::uint64_t ipow(int p, int n);

// lexicographic rank of w among words of its length
std::uint64_t word_index(const Word& w, int p);
Word word_from_index(std::uint64_t idx, int p, int len);

std::string word_string(const Word& w);
Word parse_word(const std::string& s, int p);

void check_word(const Word& w, int p);

// all words of length n in lexicographic order
std::vector<Word> all_words(int p, int n);

// Locally constant potential of depth k on the full shift over p symbols.
// values[word_index(w)] = phi on the cylinder [w], |w| = k.
class PotentialTable {
public:
    PotentialTable() = default;
    PotentialTable(int p, int depth, std::vector<double> values);

    static PotentialTable constant(int p, double c);
    static PotentialTable from_function(int p, int depth, const std::function<double(const Word&)>& fn);

    int p() const { return p_; }
    int depth() const { return k_; }
    const std::vector<double>& values() const { return v_; }
    std::size_t size() const { return v_.size(); }

    double at(std::uint64_t idx) const { return v_[idx]; }
    // value on any word of length >= depth (only the first depth symbols matter)
    double operator()(const Word& w) const;
    double eval_at(const Word& w, std::size_t offset) const;

    // same function re-tabulated at a larger depth
    PotentialTable refine(int depth) const;
    PotentialTable map(const std::function<double(double)>& g) const;

    double min() const;
    double max() const;

private:
    int p_ = 0;
    int k_ = 0;
    std::vector<double> v_;
};

struct CylinderStats {
    double E = 0, F = 0, V = 0;
};

CylinderStats cylinder_stats(const PotentialTable& phi, const Word& w);
// log of E and F for the cylinder; avoids exp when only the extrema are needed
std::pair<double, double> cylinder_log_extrema(const PotentialTable& phi, const Word& w);

double sup_abs(const PotentialTable& phi);
// M(e^phi - e^phi') on the common refinement
double sup_abs_exp_diff(const PotentialTable& a, const PotentialTable& b);

bool variation_inequality_check(const PotentialTable& phi, const PotentialTable& phi2, const Word& w);

struct ThetaMetric {
    double theta;
    explicit ThetaMetric(double t);
};

// first index where a and b differ; -1 if equal on the common length
int first_disagreement(const Word& a, const Word& b);
double theta_distance(const ThetaMetric& m, const Word& a, const Word& b);
double lipschitz_constant(const PotentialTable& phi, const ThetaMetric& m);

// Finite-depth snapshot of a general potential: table of cylinder
// representatives plus the tail-variation bound sup_{|w|=k} V_w.
struct Snapshot {
    PotentialTable table;
    double tail_variation;
};
Snapshot snapshot(int p, int depth, const std::function<double(const Word&)>& representative,
                  const std::function<double(int)>& modulus);

}  // namespace emr
