// In-flight requests carry a monotone sequence id; a response is applied
// only if no newer request has been issued since it left. One gate per
// panel keeps exactly one "current" response rendered.

export class SequenceGate {
  private issued = 0;
  private applied = 0;

  next(): number {
    this.issued += 1;
    return this.issued;
  }

  /** True if a response with this id is still the newest one issued. */
  accept(id: number): boolean {
    if (id < this.applied || id < this.issued) return false;
    this.applied = id;
    return true;
  }

  get latest(): number {
    return this.issued;
  }
}
