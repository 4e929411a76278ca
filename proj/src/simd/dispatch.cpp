/*
 * Copyright 2026 The ergo-bounds Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <string_view>

#include "ergo/simd.hpp"

namespace ergo::simd
{

std::string_view to_string(Isa isa)
{
    switch (isa)
    {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

const Kernels* kernels_for(Isa isa)
{
    switch (isa)
    {
        case Isa::scalar:
            return &detail::scalar_kernels;
        case Isa::avx2:
#if defined(ERGO_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2"))
            {
                return &detail::avx2_kernels;
            }
#endif
            return nullptr;
        case Isa::neon:
#if defined(ERGO_HAVE_NEON)
            return &detail::neon_kernels;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

namespace
{

const Kernels& select()
{
    const char* forced = std::getenv("ERGO_BOUNDS_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar")
    {
        return detail::scalar_kernels;
    }
    for (Isa isa : {Isa::avx2, Isa::neon})
    {
        if (const Kernels* k = kernels_for(isa))
        {
            return *k;
        }
    }
    return detail::scalar_kernels;
}

}  // namespace

const Kernels& active()
{
    static const Kernels& chosen = select();
    return chosen;
}

}  // namespace ergo::simd
