#pragma once

#include "lwrkit/kernels.hpp"

namespace lwr::kernels {

namespace scalar {
const KernelTable& table();
}

#if defined(LWRKIT_HAVE_AVX2_KERNELS)
namespace avx2 {
const KernelTable& table();
}
#endif

#if defined(LWRKIT_HAVE_NEON_KERNELS)
namespace neon {
const KernelTable& table();
}
#endif

}  // namespace lwr::kernels
