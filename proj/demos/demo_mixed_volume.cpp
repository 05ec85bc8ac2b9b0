// Placeholder demo, replaced once the subdivision engine lands.

#include "sparsolve/polytope.hpp"

#include <cstdio>

int main() {
    using namespace sparsolve;
    std::vector<RatVec> square = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
    Polytope p = convex_hull(square);
    std::printf("unit square: %zu vertices, volume %s\n", p.vertices.size(), to_string(p.volume).c_str());
    return 0;
}
