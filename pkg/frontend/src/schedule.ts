/** Trailing debounce: the function runs once, `ms` after the last call. */
export function debounce<A extends unknown[]>(
  ms: number,
  fn: (...args: A) => void,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
}

/** Latest-wins gate for async work: starting a new task supersedes any
 * in-flight one, whose result resolves to undefined instead of applying.
 * Keeps the display pinned to the most recent slider value. */
export class LatestWins {
  private seq = 0;

  async run<T>(task: () => Promise<T>): Promise<T | undefined> {
    const ticket = ++this.seq;
    const value = await task();
    return ticket === this.seq ? value : undefined;
  }
}
