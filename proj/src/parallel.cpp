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

/** \file     parallel.cpp
    \brief    worker-count configuration and an index-parallel loop with ordered results
*/

#include "cupart/Parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cupart
{

int threadCountFromEnv()
{
  const char* value = std::getenv( "CUPART_THREADS" );
  if( !value || !*value )
  {
    return 1;
  }
  try
  {
    return std::max( 1, std::stoi( value ) );
  }
  catch( const std::exception& )
  {
    return 1;
  }
}

void parallelFor( size_t count, int threads, const std::function<void( size_t )>& fn )
{
  const auto workers = static_cast<size_t>( std::max( 1, threads ) );
  if( workers == 1 || count < 2 )
  {
    for( size_t i = 0; i < count; i++ )
    {
      fn( i );
    }
    return;
  }

  std::atomic<size_t> next{ 0 };
  std::exception_ptr  failure;
  std::mutex          failureMutex;
  auto                work = [&]() {
    for( size_t i = next++; i < count; i = next++ )
    {
      try
      {
        fn( i );
      }
      catch( ... )
      {
        std::lock_guard lock( failureMutex );
        if( !failure )
        {
          failure = std::current_exception();
        }
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for( size_t w = 0; w < std::min( workers, count ); w++ )
  {
    pool.emplace_back( work );
  }
  for( auto& t: pool )
  {
    t.join();
  }
  if( failure )
  {
    std::rethrow_exception( failure );
  }
}

} // namespace cupart
