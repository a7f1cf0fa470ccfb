#ifndef PF_PRESENTATION_HPP
#define PF_PRESENTATION_HPP

#include "pf/element.hpp"
#include "pf/enumerate.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace pf {

struct Relation {
  std::string name;
  GraphElem elem;
};

// P = G(E)/(R) with weight-two relations; unital extensions also carry the
// weight-mixing unit relations.
class Presentation {
 public:
  std::string name;
  int lambda = -1;
  GenTable gens;
  std::vector<int> gen_ids;  // indices of the actual generators (no placeholders)
  std::vector<Relation> rels;
  bool unital = false;

  const std::vector<Relation>& closed_rels() const; // Sigma-bimodule closure
  std::string signature() const;                    // cache key material

  mutable std::mutex mu;

 private:
  mutable std::vector<Relation> closed_;
};

using PresPtr = std::shared_ptr<Presentation>;

// name in {BIB, BIB!, LieB, LieB!, uBIB!, uDPois!}; lambda defaults to -1
// and only BIB, BIB!, LieB take a generic lambda.
PresPtr builtin(const std::string& name, int lambda = -1);

// The extra BIB! relation derived from the first two of the (2,2) family.
GraphElem bibdual_rel2b(const Presentation& p);

// Left combs: iterated (2,1) generator on first outputs (j vertices,
// j+1 outputs) and its mirror on a (1,2) generator (k vertices, k+1 inputs).
GraphElem comb_out(const Presentation& p, const std::string& gen, int j);
GraphElem comb_in(const Presentation& p, const std::string& gen, int k);

// One arity/weight slice of the quotient computation.
struct QuotientCell {
  std::vector<Key> free_keys;
  std::vector<LevelGraph> free_graphs;
  RowBasis ideal;
  std::vector<Key> reps;
  int rank() const { return static_cast<int>(ideal.rank()); }
  int dim() const { return static_cast<int>(free_keys.size() - ideal.rank()); }
};

// Computes (with in-memory and optional on-disk caching) the cell spanned by
// the listed weights. Pure quadratic cells use a single weight; unital cells
// saturate across a weight window.
const QuotientCell& cell(const Presentation& p, int m, int n, std::vector<int> weights,
                         int max_genus);

RowBasis ideal_span(const Presentation& p, int m, int n, int weight, int max_genus);
int quotient_dim(const Presentation& p, int m, int n, int weight, int max_genus = 1);

// Weight window used for the unital presentations at arity (m, n): every
// tree weight whose unit count stays within `extra_units`.
std::vector<int> unital_weights(const Presentation& p, int m, int n, int extra_units);

// Normal form of x against the cell's ideal; coordinates over the reps.
SparseVec normal_form(const Presentation& p, const GraphElem& x, int m, int n,
                      std::vector<int> weights, int max_genus = 1);
SparseVec normal_form_w(const Presentation& p, const GraphElem& x, int weight,
                        int max_genus = 1);

// Koszul dual presentation: desuspended dual generators (renamed via the
// builtin convention), relations the orthogonal complements per weight-2
// arity cell under the evaluation pairing.
PresPtr koszul_dual(const Presentation& p);

// Global cache directory ("" disables the disk cache).
void set_cache_dir(const std::string& dir);
std::string cache_dir();

} // namespace pf

#endif
