#include "pseudolin/envelope.hpp"

namespace pseudolin {

EnvelopeSet EnvelopeSet::zero() {
    auto z = [](double) { return 0.0; };
    return EnvelopeSet{z, z, z, z, z, z, z, z};
}

} // namespace pseudolin
