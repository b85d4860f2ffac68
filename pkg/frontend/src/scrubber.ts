/** Frame scrubber for clip preview and results playback. */
export class ScrubberState {
  private frame = 0;
  private total: number;

  constructor(totalFrames: number) {
    if (!Number.isInteger(totalFrames) || totalFrames < 1) {
      throw new Error(`total frames must be a positive integer, got ${totalFrames}`);
    }
    this.total = totalFrames;
  }

  get currentFrame(): number {
    return this.frame;
  }

  get totalFrames(): number {
    return this.total;
  }

  /** Clamp into [0, total). Fractional input snaps to the nearest frame. */
  seek(frame: number): number {
    const snapped = Math.round(frame);
    this.frame = Math.min(this.total - 1, Math.max(0, snapped));
    return this.frame;
  }

  step(delta: number): number {
    return this.seek(this.frame + delta);
  }

  /**
   * Reload after a clip refetch. The scrubber position is preserved when it
   * is still valid for the new clip, otherwise clamped to the last frame.
   */
  reload(totalFrames: number): number {
    if (!Number.isInteger(totalFrames) || totalFrames < 1) {
      throw new Error(`total frames must be a positive integer, got ${totalFrames}`);
    }
    this.total = totalFrames;
    return this.seek(this.frame);
  }
}
