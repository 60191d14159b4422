// Snapshot-based undo stack for the what-if controls. Exploration is
// iterative, so each applied change pushes the prior snapshot; undo pops.

export class UndoStack<T> {
  private stack: T[] = [];

  constructor(private readonly depth: number = 50) {}

  push(snapshot: T): void {
    this.stack.push(snapshot);
    if (this.stack.length > this.depth) this.stack.shift();
  }

  undo(): T | null {
    return this.stack.pop() ?? null;
  }

  get size(): number {
    return this.stack.length;
  }

  clear(): void {
    this.stack = [];
  }
}
