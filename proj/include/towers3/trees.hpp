#ifndef TOWERS3_TREES_HPP
#define TOWERS3_TREES_HPP

#include <stdexcept>
#include <string>

namespace towers3 {

// The two coclass-2 descendant trees relevant here, named by their forks.
enum class Tree { Q, U };

inline char tree_char(Tree t) { return t == Tree::Q ? 'Q' : 'U'; }
inline Tree tree_from(const std::string& s) {
    if (s == "Q" || s == "q") return Tree::Q;
    if (s == "U" || s == "u") return Tree::U;
    throw std::invalid_argument("tree must be Q or U");
}

} // namespace towers3

#endif
