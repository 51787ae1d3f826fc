/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     Random.hpp
    \brief    seeded PRNG with platform-independent derived distributions
*/

#pragma once

#include <cstdint>
#include <random>

namespace cupart
{

/// mt19937_64 is fully specified by the standard; the mappings below avoid the
/// implementation-defined std distributions so results match across toolchains.
class Rng
{
public:
  explicit Rng( uint64_t seed ) : m_engine( seed ) {}

  uint64_t next() { return m_engine(); }

  /// [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>( m_engine() >> 11 ) * 0x1.0p-53; }

  double uniform( double lo, double hi ) { return lo + ( hi - lo ) * uniform(); }

  /// [0, bound) by rejection, bound > 0.
  uint64_t below( uint64_t bound )
  {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t       value;
    do
    {
      value = m_engine();
    } while( value >= limit );
    return value % bound;
  }

private:
  std::mt19937_64 m_engine;
};

} // namespace cupart
