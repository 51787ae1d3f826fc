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

/** \file     adaptive_loss.cpp
    \brief    class-weighted binary cross-entropy and its self-adaptive weight update
*/

#include "cupart/AdaptiveLoss.hpp"
#include "cupart/Error.hpp"

#include <algorithm>
#include <cmath>

namespace cupart
{

namespace
{

void checkBatch( std::span<const double> splitProb, std::span<const uint8_t> labels )
{
  if( splitProb.empty() )
  {
    throw Error( "loss of an empty batch" );
  }
  if( splitProb.size() != labels.size() )
  {
    throw ShapeError( "prediction and label counts differ" );
  }
}

double clampProbability( double p )
{
  return std::clamp( p, kProbabilityClamp, 1.0 - kProbabilityClamp );
}

} // namespace

LossWeights LossWeights::withRatio( double r ) const
{
  LossWeights w = *this;
  w.alpha1      = 2.0 * r / ( 1.0 + r );
  w.alpha0      = 2.0 / ( 1.0 + r );
  return w;
}

double weightedLoss( std::span<const double> splitProb, std::span<const uint8_t> labels, const LossWeights& weights )
{
  checkBatch( splitProb, labels );
  double sum = 0.0;
  for( size_t i = 0; i < splitProb.size(); i++ )
  {
    const double p = clampProbability( splitProb[i] );
    sum += labels[i] ? weights.alpha1 * std::log( p ) : weights.alpha0 * std::log( 1.0 - p );
  }
  return -sum / static_cast<double>( splitProb.size() );
}

double binaryCrossEntropy( std::span<const double> splitProb, std::span<const uint8_t> labels )
{
  LossWeights unit;
  return weightedLoss( splitProb, labels, unit );
}

std::vector<double> lossGradient( std::span<const double> splitProb, std::span<const uint8_t> labels,
                                  const LossWeights& weights )
{
  checkBatch( splitProb, labels );
  const double        n = static_cast<double>( splitProb.size() );
  std::vector<double> grad( splitProb.size() );
  for( size_t i = 0; i < splitProb.size(); i++ )
  {
    const double p = clampProbability( splitProb[i] );
    grad[i]        = labels[i] ? -weights.alpha1 / ( n * p ) : weights.alpha0 / ( n * ( 1.0 - p ) );
  }
  return grad;
}

WeightUpdate updateWeights( const LossWeights& current, uint64_t n0, uint64_t n1 )
{
  if( !( current.eta >= 0.0 && current.eta <= 1.0 ) )
  {
    throw Error( "eta must lie in [0, 1]" );
  }
  WeightUpdate update;
  if( n1 == 0 )
  {
    update.degenerate = true;
    n1                = 1;
  }
  if( current.eta == 0.0 )
  {
    update.weights = current;
    return update;
  }
  const double r = ( 1.0 - current.eta ) * current.ratio()
                   + current.eta * static_cast<double>( n0 ) / static_cast<double>( n1 );
  if( !( r > 0.0 ) || !std::isfinite( r ) )
  {
    // all monitoring predictions were split: keep the previous weights
    update.weights    = current;
    update.degenerate = true;
    return update;
  }
  update.weights = current.withRatio( r );
  return update;
}

} // namespace cupart
