#ifndef PF_GENERATOR_HPP
#define PF_GENERATOR_HPP

#include <string>
#include <vector>

namespace pf {

// Internal symmetry of a generator: out_perm/in_perm are images (0-based),
// and the rewired vertex equals sign times the original.
struct GenSym {
  std::vector<int> out_perm;
  std::vector<int> in_perm;
  int sign = 1;
};

struct Generator {
  std::string id;
  int m = 1;      // outputs
  int n = 0;      // inputs
  int degree = 0;
  int intrinsic_genus = 0;  // placeholders standing for genus-1 relations
  std::vector<GenSym> syms; // full group including the identity
};

class GenTable {
 public:
  // Returns the index; closes the symmetry list into a group.
  int add(Generator g);
  int index_of(const std::string& id) const;
  const Generator& operator[](int i) const { return gens_[i]; }
  size_t size() const { return gens_.size(); }
  const std::vector<Generator>& all() const { return gens_; }
  // Disambiguates equal-named generators of different tables in caches.
  const std::string& fingerprint() const { return fp_; }

 private:
  std::vector<Generator> gens_;
  std::string fp_;
};

GenSym identity_sym(int m, int n);
std::vector<GenSym> close_group(int m, int n, std::vector<GenSym> gens);

} // namespace pf

#endif
