/* udiv2147483649: unsigned 32-bit division by 2147483649 (divisor above half the dividend range, quotient is 0 or 1).
 * Authored from the package's abstract lowering sequences, not transcribed from any compiler's output.
 */
#include <stdint.h>

uint32_t udiv2147483649(uint32_t x) {
    return x < (uint32_t)0x80000001u ? (uint32_t)0u : (uint32_t)1u;
}
