/**
 * Display formatting for numbers coming out of service responses.
 *
 * These are the only transformations the UI is allowed to apply to a
 * number: probabilities render as percentages with two decimals,
 * scores (Bayes factors, joint probabilities) with four decimals. No
 * arithmetic beyond these display rules happens client-side; the test
 * harness re-derives the same strings from intercepted responses and
 * requires every rendered number to match one.
 */

export function pct(p: number): string {
  return (p * 100).toFixed(2) + "%";
}

export function score4(x: number | string): string {
  if (typeof x === "string") {
    return x; // non-finite sentinel such as "inf"
  }
  return x.toFixed(4);
}
