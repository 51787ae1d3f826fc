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

/** \file     AdaptiveLoss.hpp
    \brief    class-weighted binary cross-entropy and its self-adaptive weight update
*/

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cupart
{

constexpr double kProbabilityClamp = 1e-12;

/// Loss weights for non-split (alpha0) and split (alpha1) samples; alpha0 + alpha1 = 2.
struct LossWeights
{
  double   alpha0       = 1.0;
  double   alpha1       = 1.0;
  double   eta          = 0.5;
  uint32_t updatePeriod = 1000;

  double ratio() const { return alpha1 / alpha0; }
  /// Weights for ratio alpha1 / alpha0 = r, keeping eta and the period.
  LossWeights withRatio( double r ) const;
};

/// -(1/N) sum[ alpha1 y ln p + alpha0 (1 - y) ln(1 - p) ], p = predicted split probability.
double weightedLoss( std::span<const double> splitProb, std::span<const uint8_t> labels, const LossWeights& weights );
double binaryCrossEntropy( std::span<const double> splitProb, std::span<const uint8_t> labels );

/// d(loss) / d(p_i).
std::vector<double> lossGradient( std::span<const double> splitProb, std::span<const uint8_t> labels,
                                  const LossWeights& weights );

struct WeightUpdate
{
  LossWeights weights;
  bool        degenerate = false; // nothing was predicted as split; n1 taken as 1
};

/// Blend the ratio toward n0 / n1 (counts of non-split / split predictions) by eta.
WeightUpdate updateWeights( const LossWeights& current, uint64_t n0, uint64_t n1 );

} // namespace cupart
