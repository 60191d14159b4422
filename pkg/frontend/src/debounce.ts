// Trailing-edge debounce used to keep slider drags from flooding the
// service; 150 ms feels live while coalescing bursts.

export const DEFAULT_DEBOUNCE_MS = 150;

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number = DEFAULT_DEBOUNCE_MS,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | undefined;
  let pending: A | undefined;

  const run = (...args: A): void => {
    pending = args;
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      const latest = pending;
      pending = undefined;
      if (latest) fn(...latest);
    }, waitMs);
  };
  run.cancel = () => {
    if (timer !== undefined) clearTimeout(timer);
    timer = undefined;
    pending = undefined;
  };
  run.flush = () => {
    if (timer === undefined) return;
    clearTimeout(timer);
    timer = undefined;
    const latest = pending;
    pending = undefined;
    if (latest) fn(...latest);
  };
  return run;
}
